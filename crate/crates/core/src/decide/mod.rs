//! Positivity and ultimate positivity for integer LRS of order at most 5.

pub mod baker;
pub mod bounds;
pub mod cases;
pub mod certificate;
pub mod prefix;
pub mod torus;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub use baker::{baker_gap, baker_params, critical_threshold, degree_factor, BakerBound, BakerParams, CriticalCaseData, SymbolicThreshold};
pub use cases::{case_five_dominant, case_one_dominant, case_three_dominant, CaseResult, Outcome};
pub use certificate::replay;
pub use prefix::{prefix_check, PrefixScanner};
pub use torus::{torus_min_sign, TorusSign};

use crate::error::{Error, Result};
use crate::lrs::{degenerate_decomposition, Lrs, MAX_DECIDABLE_ORDER};
use crate::spectral::{dominance, exp_poly, SignPolicy};

/// Tunable limits, all recorded in certificates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    pub prefix_cutoff: u64,
    pub exact_below: u64,
    pub max_precision_bits: u32,
    pub relation_search_bound: i64,
    pub m_bound_scan: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config { prefix_cutoff: 1_000_000, exact_below: 2000, max_precision_bits: 256, relation_search_bound: 64, m_bound_scan: 10_000 }
    }
}

impl Config {
    pub fn policy(&self) -> SignPolicy {
        SignPolicy { exact_below: self.exact_below, max_precision_bits: self.max_precision_bits.max(64) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictKind {
    Positive,
    NotPositive,
    UltimatelyPositive,
    NotUltimatelyPositive,
    Unresolved,
}

impl VerdictKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictKind::Positive => "Positive",
            VerdictKind::NotPositive => "NotPositive",
            VerdictKind::UltimatelyPositive => "UltimatelyPositive",
            VerdictKind::NotUltimatelyPositive => "NotUltimatelyPositive",
            VerdictKind::Unresolved => "Unresolved",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Self::Positive, Self::NotPositive, Self::UltimatelyPositive, Self::NotUltimatelyPositive, Self::Unresolved]
            .into_iter()
            .find(|k| k.as_str() == s)
    }

    /// Process exit status for this verdict.
    pub fn exit_code(&self) -> i32 {
        match self {
            VerdictKind::Positive | VerdictKind::UltimatelyPositive => 0,
            VerdictKind::NotPositive | VerdictKind::NotUltimatelyPositive => 1,
            VerdictKind::Unresolved => 2,
        }
    }
}

/// From this index on, every term is nonnegative.
#[derive(Clone, Debug, PartialEq)]
pub enum Threshold {
    Exact(BigInt),
    Symbolic(SymbolicThreshold),
}

impl Threshold {
    pub fn value(&self) -> &BigInt {
        match self {
            Threshold::Exact(v) => v,
            Threshold::Symbolic(s) => &s.value,
        }
    }

    fn lift(&self, modulus: u64, residue: u64) -> Threshold {
        let f = |v: &BigInt| v * BigInt::from(modulus) + BigInt::from(residue);
        match self {
            Threshold::Exact(v) => Threshold::Exact(f(v)),
            Threshold::Symbolic(s) => Threshold::Symbolic(SymbolicThreshold {
                expression: if modulus == 1 { s.expression.clone() } else { format!("{}*({})+{}", modulus, s.expression, residue) },
                value: f(&s.value),
                log10: bounds::log10_int(&f(&s.value)),
            }),
        }
    }

    pub fn to_json(&self, cutoff: u64) -> Value {
        match self {
            Threshold::Exact(v) => json!(v.to_string()),
            Threshold::Symbolic(s) => json!({
                "symbolic": s.expression,
                "value": s.value.to_string(),
                "log10": s.log10,
                "astronomical": s.value > BigInt::from(cutoff),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub n: u64,
    pub value: BigInt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Procedure {
    Positivity,
    Ultimate,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub witness: Option<Witness>,
    pub threshold: Option<Threshold>,
    pub checked_up_to: Option<u64>,
    pub trace: Vec<Value>,
    pub config: Config,
    pub procedure: Procedure,
    pub input: Lrs,
}

fn check_order(u: &Lrs) -> Result<()> {
    if u.order() > MAX_DECIDABLE_ORDER {
        return Err(Error::OrderTooLarge { order: u.order() });
    }
    Ok(())
}

/// Analysis of one non-degenerate sequence.
pub fn analyze_nondegenerate(u: &Lrs, cfg: &Config) -> Result<CaseResult> {
    if u.is_zero_sequence() {
        return Ok(CaseResult {
            outcome: Outcome::UltimatelyPositive(Threshold::Exact(BigInt::zero())),
            trace: vec![json!({"step": "zero_sequence"})],
        });
    }
    let ep = exp_poly(u)?;
    let sd = dominance(&ep)?;
    cases::analyze(&sd, cfg)
}

struct Ultimate {
    outcome: Outcome,
    trace: Vec<Value>,
}

fn ultimate(u: &Lrs, cfg: &Config) -> Result<Ultimate> {
    check_order(u)?;
    let dec = degenerate_decomposition(u)?;
    let l = dec.modulus;
    let mut trace = vec![json!({"step": "decomposition", "modulus": l, "subsequences": dec.subsequences.len()})];
    let mut threshold: Option<Threshold> = Some(Threshold::Exact(BigInt::zero()));
    let mut undetermined: Option<String> = None;
    let mut negative = false;
    for (r, sub) in dec.subsequences.iter().enumerate() {
        let res = analyze_nondegenerate(sub, cfg)?;
        let verdict = match &res.outcome {
            Outcome::UltimatelyPositive(_) => "UltimatelyPositive",
            Outcome::NotUltimatelyPositive => "NotUltimatelyPositive",
            Outcome::Undetermined(_) => "Unresolved",
        };
        trace.push(json!({
            "step": "subsequence",
            "residue": r,
            "lrs": crate::lrs::to_text(sub),
            "verdict": verdict,
            "analysis": res.trace,
        }));
        match res.outcome {
            Outcome::UltimatelyPositive(t) => {
                let lifted = t.lift(l, r as u64);
                threshold = match threshold {
                    Some(cur) if cur.value() >= lifted.value() => Some(cur),
                    _ => Some(lifted),
                };
            }
            Outcome::NotUltimatelyPositive => negative = true,
            Outcome::Undetermined(why) => undetermined = Some(why),
        }
    }
    let outcome = if negative {
        Outcome::NotUltimatelyPositive
    } else if let Some(why) = undetermined {
        Outcome::Undetermined(why)
    } else {
        Outcome::UltimatelyPositive(threshold.unwrap())
    };
    Ok(Ultimate { outcome, trace })
}

/// Is `u_n >= 0` for all sufficiently large `n`?
pub fn decide_ultimate(u: &Lrs, cfg: &Config) -> Result<Verdict> {
    let ult = ultimate(u, cfg)?;
    let (kind, threshold) = match ult.outcome {
        Outcome::UltimatelyPositive(t) => (VerdictKind::UltimatelyPositive, Some(t)),
        Outcome::NotUltimatelyPositive => (VerdictKind::NotUltimatelyPositive, None),
        Outcome::Undetermined(_) => (VerdictKind::Unresolved, None),
    };
    let mut trace = ult.trace;
    trace.push(json!({"step": "ultimate", "verdict": kind.as_str()}));
    Ok(Verdict { kind, witness: None, threshold, checked_up_to: None, trace, config: cfg.clone(), procedure: Procedure::Ultimate, input: u.clone() })
}

const WITNESS_START: u64 = 1024;
const WITNESS_CAP: u64 = 1 << 40;

/// Is `u_n >= 0` for every `n`?
pub fn decide_positivity(u: &Lrs, cfg: &Config) -> Result<Verdict> {
    let ult = ultimate(u, cfg)?;
    let mut trace = ult.trace;
    let policy = cfg.policy();
    let mut scanner = PrefixScanner::new(u, policy);
    let verdict = |kind, witness, threshold, checked_up_to, trace| Verdict {
        kind,
        witness,
        threshold,
        checked_up_to,
        trace,
        config: cfg.clone(),
        procedure: Procedure::Positivity,
        input: u.clone(),
    };
    match ult.outcome {
        Outcome::NotUltimatelyPositive => {
            trace.push(json!({"step": "ultimate", "verdict": "NotUltimatelyPositive"}));
            let mut horizon = WITNESS_START;
            loop {
                let found = scanner.advance_to(horizon);
                trace.push(json!({"step": "witness_scan", "horizon": horizon, "found": found.is_some()}));
                if let Some((n, value)) = found {
                    return Ok(verdict(VerdictKind::NotPositive, Some(Witness { n, value }), None, Some(n), trace));
                }
                if horizon >= WITNESS_CAP {
                    return Err(Error::Internal("no negative term found below the witness cap".into()));
                }
                horizon = horizon.saturating_mul(2);
            }
        }
        Outcome::UltimatelyPositive(t) => {
            trace.push(json!({"step": "ultimate", "verdict": "UltimatelyPositive", "threshold": t.to_json(cfg.prefix_cutoff)}));
            let tv = t.value();
            if tv <= &BigInt::from(cfg.prefix_cutoff) {
                let upto = tv.to_u64().unwrap_or(0);
                let found = if upto == 0 { None } else { scanner.advance_to(upto - 1) };
                trace.push(json!({"step": "prefix_scan", "upto": upto, "exact_fallbacks": scanner.exact_fallbacks}));
                return Ok(match found {
                    Some((n, value)) => verdict(VerdictKind::NotPositive, Some(Witness { n, value }), Some(t), Some(n), trace),
                    None => verdict(VerdictKind::Positive, None, Some(t), Some(upto), trace),
                });
            }
            let found = scanner.advance_to(cfg.prefix_cutoff);
            trace.push(json!({"step": "prefix_scan", "upto": cfg.prefix_cutoff, "exact_fallbacks": scanner.exact_fallbacks, "threshold_exceeds_cutoff": true}));
            Ok(match found {
                Some((n, value)) => verdict(VerdictKind::NotPositive, Some(Witness { n, value }), Some(t), Some(n), trace),
                None => verdict(VerdictKind::Unresolved, None, Some(t), Some(cfg.prefix_cutoff), trace),
            })
        }
        Outcome::Undetermined(why) => {
            trace.push(json!({"step": "ultimate", "verdict": "Unresolved", "reason": why}));
            let found = scanner.advance_to(cfg.prefix_cutoff);
            Ok(match found {
                Some((n, value)) => verdict(VerdictKind::NotPositive, Some(Witness { n, value }), None, Some(n), trace),
                None => verdict(VerdictKind::Unresolved, None, None, Some(cfg.prefix_cutoff), trace),
            })
        }
    }
}

impl Verdict {
    /// The exact term at the witness index is negative.
    pub fn witness_verifies(&self) -> bool {
        match &self.witness {
            Some(w) => {
                let t = self.input.term(w.n);
                t == w.value && t.is_negative()
            }
            None => true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> Config {
        Config { prefix_cutoff: 10_000, ..Config::default() }
    }

    #[test]
    fn fibonacci() {
        let u = Lrs::from_i64(&[1, 1], &[0, 1]).unwrap();
        assert_eq!(decide_ultimate(&u, &cfg()).unwrap().kind, VerdictKind::UltimatelyPositive);
        let v = decide_positivity(&u, &cfg()).unwrap();
        assert_eq!(v.kind, VerdictKind::Positive);
    }

    #[test]
    fn negative_start() {
        let u = Lrs::from_i64(&[1, 1], &[-1, 5]).unwrap();
        let v = decide_positivity(&u, &cfg()).unwrap();
        assert_eq!(v.kind, VerdictKind::NotPositive);
        assert_eq!(v.witness, Some(Witness { n: 0, value: BigInt::from(-1) }));
        assert!(v.witness_verifies());
    }

    #[test]
    fn alternating() {
        let u = Lrs::from_i64(&[-1], &[1]).unwrap();
        assert_eq!(decide_ultimate(&u, &cfg()).unwrap().kind, VerdictKind::NotUltimatelyPositive);
        let v = decide_positivity(&u, &cfg()).unwrap();
        assert_eq!(v.witness.unwrap().n, 1);
    }

    #[test]
    fn critical_without_residual() {
        let u = Lrs::from_i64(&[11, -55, 125], &[0, 4, 64]).unwrap();
        let v = decide_ultimate(&u, &cfg()).unwrap();
        assert_eq!(v.kind, VerdictKind::UltimatelyPositive);
        assert!(v.to_json().to_string().contains("\"critical\":true"));
        assert_eq!(decide_positivity(&u, &cfg()).unwrap().kind, VerdictKind::Positive);
    }

    #[test]
    fn critical_with_residual_is_unresolved() {
        // 2*5^n - (3+4i)^n - (3-4i)^n + 1
        let u = Lrs::from_i64(&[12, -66, 180, -125], &[1, 5, 65, 485]).unwrap();
        let v = decide_positivity(&u, &Config { prefix_cutoff: 2000, ..cfg() }).unwrap();
        assert_eq!(v.kind, VerdictKind::Unresolved);
        assert_eq!(v.checked_up_to, Some(2000));
        let j = v.to_json();
        assert_eq!(j["threshold"]["astronomical"], serde_json::json!(true));
        let r = replay(&j).unwrap();
        assert!(r.identical);
    }

    #[test]
    fn order_six_rejected() {
        let u = Lrs::from_i64(&[0, 0, 0, 0, 0, 1], &[1, 1, 1, 1, 1, 1]).unwrap();
        assert!(matches!(decide_positivity(&u, &cfg()), Err(Error::OrderTooLarge { order: 6 })));
    }
}
