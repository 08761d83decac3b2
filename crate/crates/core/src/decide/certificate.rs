//! Certificate JSON and replay.

use num_bigint::BigInt;
use serde_json::{json, Value};

use super::{decide_positivity, decide_ultimate, Config, Procedure, Verdict, VerdictKind};
use crate::error::{Error, Result};
use crate::lrs::{parse_raw, to_json, validate_and_normalize};

impl Verdict {
    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.kind.as_str(),
            "witness": self.witness.as_ref().map(|w| json!({"n": w.n, "value": w.value.to_string()})),
            "threshold": self.threshold.as_ref().map(|t| t.to_json(self.config.prefix_cutoff)),
            "checked_up_to": self.checked_up_to,
            "procedure": self.procedure,
            "input": to_json(&self.input),
            "config": self.config,
            "trace": self.trace,
        })
    }
}

/// Outcome of re-running a certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct ReplayReport {
    pub recorded: VerdictKind,
    pub replayed: VerdictKind,
    pub identical: bool,
}

fn field<'a>(v: &'a Value, k: &str) -> Result<&'a Value> {
    v.get(k).ok_or_else(|| Error::Parse { offset: 0, message: format!("certificate lacks `{k}`") })
}

/// Re-run the recorded procedure with the recorded configuration and
/// compare verdict, witness and threshold.
pub fn replay(cert: &Value) -> Result<ReplayReport> {
    let kind = field(cert, "verdict")?
        .as_str()
        .and_then(VerdictKind::parse)
        .ok_or_else(|| Error::Parse { offset: 0, message: "unknown verdict".into() })?;
    let cfg: Config = serde_json::from_value(field(cert, "config")?.clone())
        .map_err(|e| Error::Parse { offset: 0, message: e.to_string() })?;
    let procedure: Procedure = serde_json::from_value(field(cert, "procedure")?.clone())
        .map_err(|e| Error::Parse { offset: 0, message: e.to_string() })?;
    let raw = parse_raw(&field(cert, "input")?.to_string())?;
    let u = validate_and_normalize(&raw)?;
    let v = match procedure {
        Procedure::Positivity => decide_positivity(&u, &cfg)?,
        Procedure::Ultimate => decide_ultimate(&u, &cfg)?,
    };
    let fresh = v.to_json();
    let same = |k: &str| fresh.get(k) == cert.get(k);
    let witness_ok = match (cert.get("witness"), &v.witness) {
        (Some(Value::Object(w)), Some(x)) => {
            w.get("value").and_then(|s| s.as_str()).and_then(|s| s.parse::<BigInt>().ok()) == Some(x.value.clone())
                && w.get("n").and_then(|n| n.as_u64()) == Some(x.n)
        }
        (Some(Value::Null) | None, None) => true,
        _ => false,
    };
    let identical = v.kind == kind && witness_ok && same("threshold") && same("checked_up_to");
    Ok(ReplayReport { recorded: kind, replayed: v.kind, identical })
}
