//! Case analysis on the number of dominant characteristic roots.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::baker::{critical_threshold, CriticalCaseData};
use super::bounds::{abs_hi, cauchy_threshold, gap_lo, geometric_below, re_lo};
use super::torus::{torus_min_sign, TorusSign};
use super::{Config, Threshold};
use crate::algebra::algebraic::AlgebraicNumber;
use crate::error::Result;
use crate::lrs::format::format_rational;
use crate::relations::relation_lattice;
use crate::spectral::SpectralData;

/// Result of analyzing one non-degenerate sequence.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    UltimatelyPositive(Threshold),
    NotUltimatelyPositive,
    /// Only reachable when a certified minimum cannot be separated from zero.
    Undetermined(String),
}

#[derive(Clone, Debug)]
pub struct CaseResult {
    pub outcome: Outcome,
    pub trace: Vec<Value>,
}

impl CaseResult {
    fn new(outcome: Outcome, step: Value) -> Self {
        CaseResult { outcome, trace: vec![step] }
    }
}

fn q(x: &BigRational) -> String {
    format_rational(x)
}

fn describe(a: &AlgebraicNumber) -> Value {
    let (re, im) = a.to_f64();
    json!({
        "poly": a.poly().coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "approx": if a.is_real() { json!(re) } else { json!([re, im]) },
    })
}

fn has_residual(sd: &SpectralData) -> bool {
    !sd.residual.is_empty()
}

/// `max(T, N + 1)` when a residual is present.
fn with_tail(sd: &SpectralData, t: BigInt) -> BigInt {
    if has_residual(sd) {
        t.max(&sd.tail_n + 1)
    } else {
        t
    }
}

/// Threshold for `lead n^e - sum_j rest_j n^j (- 1 if residual) > 0`.
fn poly_threshold(sd: &SpectralData, lead: &BigRational, rest: Vec<BigRational>, e: usize) -> BigInt {
    let base = BigRational::one() - &sd.tail_epsilon;
    if e == 0 {
        return if has_residual(sd) { with_tail(sd, geometric_below(&base, lead)) } else { BigInt::zero() };
    }
    let mut rest = rest;
    if has_residual(sd) {
        rest[0] += BigRational::one();
    }
    with_tail(sd, cauchy_threshold(lead, &rest))
}

/// No dominant root besides `rho`.
pub fn case_one_dominant(sd: &SpectralData) -> Result<CaseResult> {
    let a = &sd.rho_coeff;
    let e = a.len() - 1;
    let lc = &a[e];
    let s = lc.sign()?;
    let step = |verdict: &str, t: Option<&BigInt>| {
        json!({
            "step": "case_one_dominant",
            "degree": e,
            "leading_coefficient": describe(lc),
            "tail_epsilon": q(&sd.tail_epsilon),
            "tail_n": sd.tail_n.to_string(),
            "outcome": verdict,
            "threshold": t.map(|t| t.to_string()),
        })
    };
    if s < 0 {
        return Ok(CaseResult::new(Outcome::NotUltimatelyPositive, step("leading coefficient negative", None)));
    }
    let lead = re_lo(lc);
    let lead = if lead > BigRational::zero() { lead } else { super::bounds::abs_lo(lc) };
    let rest: Vec<BigRational> = a[..e].iter().map(abs_hi).collect();
    let t = poly_threshold(sd, &lead, rest, e);
    Ok(CaseResult::new(Outcome::UltimatelyPositive(Threshold::Exact(t.clone())), step("leading coefficient positive", Some(&t))))
}

/// `rho` plus one conjugate pair.
pub fn case_three_dominant(sd: &SpectralData, cfg: &Config) -> Result<CaseResult> {
    let a = &sd.rho_coeff;
    let entry = &sd.dominant_group[0];
    let c = &entry.coeff_poly;
    let (da, dc) = (a.len() - 1, c.len() - 1);
    let mut base = json!({
        "step": "case_three_dominant",
        "degree_a": da,
        "degree_c": dc,
        "lambda1": describe(&entry.lambda),
        "tail_epsilon": q(&sd.tail_epsilon),
        "tail_n": sd.tail_n.to_string(),
    });
    let finish = |mut v: Value, outcome: Outcome, note: &str| {
        v["outcome"] = json!(note);
        if let Outcome::UltimatelyPositive(Threshold::Exact(t)) = &outcome {
            v["threshold"] = json!(t.to_string());
        }
        CaseResult::new(outcome, v)
    };
    match da.cmp(&dc) {
        Ordering::Less => {
            return Ok(finish(base, Outcome::NotUltimatelyPositive, "oscillating part dominates"));
        }
        Ordering::Greater => {
            let lc = &a[da];
            if lc.sign()? < 0 {
                return Ok(finish(base, Outcome::NotUltimatelyPositive, "leading coefficient negative"));
            }
            let lead = super::bounds::abs_lo(lc);
            let two = BigRational::from_integer(2.into());
            let rest: Vec<BigRational> = (0..da).map(|j| abs_hi(&a[j]) + if j <= dc { &two * abs_hi(&c[j]) } else { BigRational::zero() }).collect();
            let t = poly_threshold(sd, &lead, rest, da);
            return Ok(finish(base, Outcome::UltimatelyPositive(Threshold::Exact(t)), "leading coefficient positive"));
        }
        Ordering::Equal => {}
    }
    let e = da;
    let d = &a[e];
    let c1 = &c[e];
    base["d"] = describe(d);
    base["c1"] = describe(c1);
    if d.sign()? <= 0 {
        return Ok(finish(base, Outcome::NotUltimatelyPositive, "d < 2|c1|"));
    }
    // d^2 against 4 |c1|^2
    let lhs = d.mul(d);
    let rhs = c1.abs2().mul_rational(&BigRational::from_integer(4.into()));
    match lhs.compare_real(&rhs)? {
        Ordering::Less => Ok(finish(base, Outcome::NotUltimatelyPositive, "d < 2|c1|")),
        Ordering::Greater => {
            let two = BigRational::from_integer(2.into());
            let margin = gap_lo(d, c1, &two);
            base["margin_lower"] = json!(q(&margin));
            let rest: Vec<BigRational> = (0..e).map(|j| abs_hi(&a[j]) + &two * abs_hi(&c[j])).collect();
            let t = poly_threshold(sd, &margin, rest, e);
            Ok(finish(base, Outcome::UltimatelyPositive(Threshold::Exact(t)), "d > 2|c1|"))
        }
        Ordering::Equal => {
            base["critical"] = json!(true);
            if e > 0 {
                return Ok(finish(base, Outcome::Undetermined("critical case with non-constant coefficients".into()), "d = 2|c1|"));
            }
            if !has_residual(sd) {
                // u_n / rho^n = d (1 + cos(...)) >= 0
                return Ok(finish(base, Outcome::UltimatelyPositive(Threshold::Exact(BigInt::zero())), "d = 2|c1|, no residual"));
            }
            let ccd = CriticalCaseData { d: d.clone(), c1: c1.clone(), lambda1: entry.lambda.clone() };
            let (sym, mut extra) = critical_threshold(&ccd, sd, cfg.m_bound_scan)?;
            let mut r = finish(base, Outcome::UltimatelyPositive(Threshold::Symbolic(sym)), "d = 2|c1|, Baker gap");
            r.trace.append(&mut extra);
            Ok(r)
        }
    }
}

/// `rho` plus two conjugate pairs; the residual is empty for order at most 5.
pub fn case_five_dominant(sd: &SpectralData, cfg: &Config) -> Result<CaseResult> {
    let a = &sd.rho_coeff[0];
    let (e1, e2) = (&sd.dominant_group[0], &sd.dominant_group[2]);
    let (c1, c2) = (&e1.coeff_poly[0], &e2.coeff_poly[0]);
    let lambdas = [e1.lambda.clone(), e2.lambda.clone()];
    let basis = relation_lattice(&lambdas, cfg.relation_search_bound, cfg.max_precision_bits);
    let sign = torus_min_sign(a, c1, c2, &basis)?;
    let step = json!({
        "step": "case_five_dominant",
        "a": describe(a),
        "c1": describe(c1),
        "c2": describe(c2),
        "lambda1": describe(&e1.lambda),
        "lambda2": describe(&e2.lambda),
        "relation_basis": basis.vectors,
        "torus_min_sign": sign,
    });
    let outcome = match sign {
        TorusSign::Negative => Outcome::NotUltimatelyPositive,
        TorusSign::Zero | TorusSign::Positive => Outcome::UltimatelyPositive(Threshold::Exact(BigInt::zero())),
        TorusSign::Undetermined => Outcome::Undetermined("torus minimum not separated from zero".into()),
    };
    Ok(CaseResult::new(outcome, step))
}

/// Dispatch on the dominant group.
pub fn analyze(sd: &SpectralData, cfg: &Config) -> Result<CaseResult> {
    if sd.rho.is_none() {
        return Ok(CaseResult::new(
            Outcome::NotUltimatelyPositive,
            json!({"step": "dominance", "outcome": "no positive real dominant root", "dominant_count": sd.top_terms.len()}),
        ));
    }
    match sd.dominant_group.len() {
        0 => case_one_dominant(sd),
        2 => case_three_dominant(sd, cfg),
        4 if sd.residual.is_empty() && sd.rho_coeff.len() == 1 => case_five_dominant(sd, cfg),
        n => Ok(CaseResult::new(
            Outcome::Undetermined(format!("{} dominant roots besides rho", n)),
            json!({"step": "dominance", "outcome": "unsupported dominant shape", "dominant_count": n + 1}),
        )),
    }
}
