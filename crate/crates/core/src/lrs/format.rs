//! JSON and one-line text encodings of recurrences.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::model::{Lrs, RawLrs};
use crate::error::{Error, Result};

fn perr(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse { offset, message: message.into() }
}

/// Parse `p`, `-p`, or `p/q`.
pub fn parse_rational(s: &str) -> std::result::Result<BigRational, String> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| format!("bad numerator `{n}`"))?;
            let d = BigInt::from_str(d.trim()).map_err(|_| format!("bad denominator `{d}`"))?;
            if d.is_zero() {
                return Err("zero denominator".into());
            }
            Ok(BigRational::new(n, d))
        }
        None => BigInt::from_str(s).map(BigRational::from_integer).map_err(|_| format!("bad number `{s}`")),
    }
}

pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Byte offset of a line/column pair reported by serde_json.
fn offset_of(src: &str, line: usize, column: usize) -> usize {
    let mut off = 0;
    for (i, l) in src.split_inclusive('\n').enumerate() {
        if i + 1 == line {
            return off + column.saturating_sub(1).min(l.len());
        }
        off += l.len();
    }
    src.len()
}

/// Byte offset of the `idx`-th element of array `key` (best effort).
fn element_offset(src: &str, key: &str, idx: usize) -> usize {
    let Some(start) = src.find(&format!("\"{key}\"")) else { return 0 };
    let Some(open) = src[start..].find('[').map(|o| start + o) else { return start };
    let bytes = src.as_bytes();
    let skip_ws = |mut i: usize| {
        while i < bytes.len() && bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        i
    };
    let (mut depth, mut count, mut in_str) = (0usize, 0usize, false);
    let mut elem = skip_ws(open + 1);
    for i in open + 1..bytes.len() {
        let b = bytes[i];
        if in_str {
            if b == b'"' && bytes[i - 1] != b'\\' {
                in_str = false;
            }
            continue;
        }
        match b {
            b'"' => in_str = true,
            b'[' | b'{' => depth += 1,
            b']' | b'}' if depth == 0 => break,
            b']' | b'}' => depth -= 1,
            b',' if depth == 0 => {
                if count == idx {
                    break;
                }
                count += 1;
                elem = skip_ws(i + 1);
            }
            _ => {}
        }
    }
    elem
}

fn value_to_rational(v: &Value) -> std::result::Result<BigRational, String> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string()),
        other => Err(format!("expected an integer or rational string, found {other}")),
    }
}

pub fn parse_json_raw(src: &str) -> Result<RawLrs> {
    let v: Value = serde_json::from_str(src).map_err(|e| perr(offset_of(src, e.line(), e.column()), e.to_string()))?;
    let obj = v.as_object().ok_or_else(|| perr(0, "expected a JSON object"))?;
    let arr = |key: &str| -> Result<Vec<BigRational>> {
        let a = obj
            .get(key)
            .ok_or_else(|| perr(0, format!("missing field `{key}`")))?
            .as_array()
            .ok_or_else(|| perr(element_offset(src, key, 0), format!("`{key}` must be an array")))?;
        a.iter()
            .enumerate()
            .map(|(i, x)| value_to_rational(x).map_err(|m| perr(element_offset(src, key, i), format!("{key}[{i}]: {m}"))))
            .collect()
    };
    let coeffs = arr("coeffs")?;
    let initial = arr("initial")?;
    if let Some(order) = obj.get("order") {
        let k = order.as_u64().ok_or_else(|| perr(src.find("\"order\"").unwrap_or(0), "`order` must be a natural number"))?;
        if k as usize != coeffs.len() || k as usize != initial.len() {
            return Err(perr(
                src.find("\"order\"").unwrap_or(0),
                format!("order {k} disagrees with {} coefficients and {} initial terms", coeffs.len(), initial.len()),
            ));
        }
    }
    RawLrs::new(coeffs, initial)
}

/// Parse `a1 ... ak | u0 ... u_{k-1}`.
pub fn parse_text_raw(src: &str) -> Result<RawLrs> {
    let line = src.trim_end_matches(['\n', '\r']);
    let bar = line.find('|').ok_or_else(|| perr(line.len(), "expected `|` between coefficients and initial terms"))?;
    if line[bar + 1..].contains('|') {
        return Err(perr(bar + 1 + line[bar + 1..].find('|').unwrap(), "more than one `|`"));
    }
    let tokens = |base: usize, part: &str| -> Result<Vec<BigRational>> {
        let mut out = vec![];
        let mut pos = 0;
        for tok in part.split_whitespace() {
            let at = pos + part[pos..].find(tok).unwrap();
            pos = at + tok.len();
            out.push(parse_rational(tok).map_err(|m| perr(base + at, m))?);
        }
        Ok(out)
    };
    let coeffs = tokens(0, &line[..bar])?;
    let initial = tokens(bar + 1, &line[bar + 1..])?;
    if coeffs.len() != initial.len() {
        return Err(perr(bar, format!("{} coefficients but {} initial terms", coeffs.len(), initial.len())));
    }
    RawLrs::new(coeffs, initial).map_err(|e| perr(0, e.to_string()))
}

/// Parse either encoding (JSON when the first non-blank byte is `{`).
pub fn parse_raw(src: &str) -> Result<RawLrs> {
    if src.trim_start().starts_with('{') {
        parse_json_raw(src)
    } else {
        parse_text_raw(src)
    }
}

pub fn to_json(u: &Lrs) -> Value {
    json!({
        "order": u.order(),
        "coeffs": u.coeffs().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "initial": u.initial().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
    })
}

pub fn raw_to_json(u: &RawLrs) -> Value {
    json!({
        "order": u.order(),
        "coeffs": u.coeffs.iter().map(format_rational).collect::<Vec<_>>(),
        "initial": u.initial.iter().map(format_rational).collect::<Vec<_>>(),
    })
}

pub fn to_text(u: &Lrs) -> String {
    let j = |v: &[BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    format!("{} | {}", j(u.coeffs()), j(u.initial()))
}

impl FromStr for RawLrs {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_raw(s)
    }
}
