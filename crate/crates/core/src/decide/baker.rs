//! Linear-forms-in-logarithms gap and the critical-case threshold.
//!
//! For `Lambda(n) = n*log(lambda) + log(w) + 2*pi*i*k` with `lambda` not a
//! root of unity, `|Lambda(n)| > (2n+1)^(-E)` with
//! `E = log^2(H) * (48 D^2)^10`, apart from at most one index `M`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

use super::bounds::{abs_hi, abs_lo, geometric_below, ln_hi, ln_lo, log10_int};
use crate::algebra::algebraic::AlgebraicNumber;
use crate::algebra::IntPoly;
use crate::error::{Error, Result};
use crate::numeric::interval::{ln_interval, ln_rational, Interval};
use crate::spectral::SpectralData;

/// `(48 D^2)^10`.
pub fn degree_factor(d: u64) -> BigInt {
    num_traits::pow(BigInt::from(48u64) * BigInt::from(d) * BigInt::from(d), 10)
}

/// Degree and height data for the gap.
#[derive(Clone, Debug, PartialEq)]
pub struct BakerParams {
    pub degree: u64,
    /// Upper bound on `log H`, at least 1.
    pub log_height: BigRational,
}

impl BakerParams {
    pub fn new(degree: u64, log_height: BigRational) -> Self {
        let one = BigRational::one();
        BakerParams { degree, log_height: if log_height < one { one } else { log_height } }
    }

    /// `E = log^2 H * (48 D^2)^10`.
    pub fn exponent(&self) -> BigRational {
        &self.log_height * &self.log_height * BigRational::from_integer(degree_factor(self.degree))
    }
}

/// The lower bound `(2n+1)^(-E)` on `|Lambda(n)|`, kept as a power expression.
#[derive(Clone, Debug, PartialEq)]
pub struct BakerBound {
    pub params: BakerParams,
    pub n: BigInt,
}

impl BakerBound {
    pub fn base(&self) -> BigInt {
        BigInt::from(2) * &self.n + 1
    }

    pub fn exponent(&self) -> BigRational {
        self.params.exponent()
    }

    /// Enclosure of `ln` of the bound.
    pub fn ln_bound(&self, prec: u32) -> Interval {
        let e = Interval::from_rational(&self.exponent(), prec);
        ln_interval(&Interval::from_int(&self.base()), prec).mul(&e, prec).neg()
    }

    /// Decimal logarithm of the bound (an estimate for reporting).
    pub fn log10(&self) -> f64 {
        -self.exponent().to_f64().unwrap_or(f64::INFINITY) * log10_int(&self.base())
    }

    /// Strict comparison of two bounds.
    pub fn is_smaller_than(&self, o: &BakerBound) -> Option<bool> {
        let mut prec = 64;
        while prec <= 4096 {
            let (a, b) = (self.ln_bound(prec), o.ln_bound(prec));
            if a.hi < b.lo {
                return Some(true);
            }
            if b.hi <= a.lo {
                return Some(false);
            }
            if self.params == o.params && self.n == o.n {
                return Some(false);
            }
            prec *= 2;
        }
        None
    }

    /// Materialize as a rational when the exponent is a small integer.
    pub fn to_rational(&self, max_exponent: u64) -> Option<BigRational> {
        let e = self.exponent();
        if !e.is_integer() {
            return None;
        }
        let k = e.to_integer().to_u64().filter(|&k| k <= max_exponent)?;
        Some(BigRational::new(BigInt::one(), num_traits::pow(self.base(), k as usize)))
    }

    pub fn expression(&self) -> String {
        format!(
            "({})^-(({})^2 * (48*{}^2)^10)",
            self.base(),
            crate::lrs::format::format_rational(&self.params.log_height),
            self.params.degree
        )
    }
}

/// Upper bound on `ln H(alpha)` via the polynomial `p` vanishing at `alpha`.
fn log_height_of(p: &IntPoly, minimal: bool) -> BigRational {
    let h = if minimal {
        BigRational::from_integer(p.height())
    } else {
        // Mignotte: every factor has height at most 2^deg * |p|_2
        let n2 = p.norm2_sq().sqrt() + BigInt::one();
        BigRational::from_integer((BigInt::one() << p.degree()) * n2)
    };
    ln_hi(&h)
}

/// Vanishing polynomial for `c/|c|` and whether it is known to be minimal.
fn unit_direction_poly(c: &AlgebraicNumber) -> Result<(IntPoly, bool)> {
    if c.as_rational().is_some() {
        return Ok((IntPoly::from_i64(&[-1, 1]), true));
    }
    let w2 = c.div(&c.conj())?;
    let p = w2.poly().subs_pow(2);
    Ok((p, false))
}

/// Degree and height parameters for `lambda` and `c/|c|`.
pub fn baker_params(lambda: &AlgebraicNumber, c: &AlgebraicNumber) -> Result<BakerParams> {
    if lambda.is_root_of_unity().is_some() {
        return Err(Error::Precondition("lambda is a root of unity".into()));
    }
    if c.is_zero() {
        return Err(Error::Precondition("zero coefficient".into()));
    }
    let lp = lambda.poly();
    let lh = log_height_of(lp, lp.degree() <= 2);
    let (wp, minimal) = unit_direction_poly(c)?;
    let wh = log_height_of(&wp, minimal || wp.degree() <= 1);
    let d = (lp.degree() as u64).max(wp.degree() as u64);
    Ok(BakerParams::new(d, if lh > wh { lh } else { wh }))
}

/// The gap `|Lambda(n)| >= (2n+1)^(-E)` for the critical branch.
pub fn baker_gap(lambda: &AlgebraicNumber, c: &AlgebraicNumber, n: u64) -> Result<BakerBound> {
    Ok(BakerBound { params: baker_params(lambda, c)?, n: BigInt::from(n) })
}

/// The index `n <= scan` with `lambda^n = -|c|/c`, if any.
pub fn m_bound(lambda: &AlgebraicNumber, c: &AlgebraicNumber, scan: u64) -> Result<Option<u64>> {
    if c.as_rational().is_some() {
        // the target is -1 or 1, a root of unity
        return Ok(None);
    }
    let target2 = c.conj().div(c)?;
    if target2.is_root_of_unity().is_some() {
        return Ok(None);
    }
    let (lr, li) = lambda.to_f64();
    let (cr, ci) = c.to_f64();
    let tl = li.atan2(lr) / std::f64::consts::TAU;
    // -|c|/c has argument pi - arg(c)
    let tt = (std::f64::consts::PI - ci.atan2(cr)) / std::f64::consts::TAU;
    for n in 1..=scan {
        let x = n as f64 * tl - tt;
        if (x - x.round()).abs() > 1e-6 {
            continue;
        }
        let p = lambda.pow(2 * n);
        if !p.equal(&target2) {
            continue;
        }
        // lambda^n = +-target; pick the sign numerically
        let (pr, pi) = lambda.pow(n).to_f64();
        let tr = -cr / cr.hypot(ci);
        let ti = ci / cr.hypot(ci);
        if (pr - tr).abs() + (pi - ti).abs() < 1.0 {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// A threshold beyond the explicit scan range, kept with its derivation.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicThreshold {
    pub expression: String,
    pub value: BigInt,
    pub log10: f64,
}

/// Least `n >= start` with `n*l > 2e*ln(2n+1) + c`, assuming the left side
/// eventually dominates and the difference increases from `start` on.
fn solve_log_inequality(l: &BigRational, e: &BigRational, c: &BigRational, start: &BigInt) -> BigInt {
    let prec = 128;
    let li = Interval::from_rational(l, prec);
    let ei = Interval::from_rational(&(e * BigRational::from_integer(2.into())), prec);
    let ci = Interval::from_rational(c, prec);
    let ok = |n: &BigInt| {
        let lhs = li.mul(&Interval::from_int(n), prec);
        let m = BigInt::from(2) * n + 1;
        let rhs = ei.mul(&ln_interval(&Interval::from_int(&m), prec), prec).add(&ci, prec);
        lhs.lo > rhs.hi
    };
    let mut lo = start.clone();
    if ok(&lo) {
        return lo;
    }
    let mut step = BigInt::one().max(start.clone());
    let mut hi = &lo + &step;
    while !ok(&hi) {
        lo = hi.clone();
        step *= 2;
        hi = &lo + &step;
    }
    while &hi - &lo > BigInt::one() {
        let mid = (&lo + &hi) >> 1;
        if ok(&mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Critical-case data `d = 2|c1|`.
#[derive(Clone, Debug)]
pub struct CriticalCaseData {
    pub d: AlgebraicNumber,
    pub c1: AlgebraicNumber,
    pub lambda1: AlgebraicNumber,
}

/// Threshold for `d = 2|c1|` with a nonempty residual.
pub fn critical_threshold(ccd: &CriticalCaseData, sd: &SpectralData, m_scan: u64) -> Result<(SymbolicThreshold, Vec<Value>)> {
    let params = baker_params(&ccd.lambda1, &ccd.c1)?;
    let m = m_bound(&ccd.lambda1, &ccd.c1, m_scan)?;
    let one = BigRational::one();
    let base = &one - &sd.tail_epsilon;
    let c_lo = abs_lo(&ccd.c1);
    let eleven_twelfths = BigRational::new(11.into(), 12.into());
    let n1 = geometric_below(&base, &(&eleven_twelfths * &c_lo));
    let l_lo = -ln_hi(&base);
    let e_hi = params.exponent();
    let c_term = ln_hi(&(BigRational::new(12.into(), 11.into()) / &c_lo));
    // 2n+1 = 4E/L minimizes the gap function
    let start = super::bounds::ceil_q(&(BigRational::from_integer(2.into()) * &e_hi / &l_lo));
    let n2 = solve_log_inequality(&l_lo, &e_hi, &c_term, &start.max(BigInt::one()));
    let tail: BigInt = &sd.tail_n + 1;
    let mut value = tail.clone().max(n1.clone()).max(n2.clone());
    if let Some(mb) = m {
        value = value.max(BigInt::from(mb) + 1);
    }
    let expression = format!(
        "max(N+1, N', N''{}) with N = {}, N' = {}, N'' = least n >= 2E/L with n*L > 2E*ln(2n+1) + ln(12/(11|c1|)), E = {}, L = -ln(1-eps) >= {:.6e}",
        if m.is_some() { ", M+1" } else { "" },
        sd.tail_n,
        n1,
        format!("({})^2 * (48*{}^2)^10", crate::lrs::format::format_rational(&params.log_height), params.degree),
        l_lo.to_f64().unwrap_or(0.0)
    );
    let log10 = log10_int(&value);
    let trace = vec![json!({
        "step": "critical_threshold",
        "baker_degree": params.degree,
        "baker_log_height": crate::lrs::format::format_rational(&params.log_height),
        "degree_factor": degree_factor(params.degree).to_string(),
        "m_bound": m,
        "m_bound_scan": m_scan,
        "tail_n": sd.tail_n.to_string(),
        "tail_epsilon": crate::lrs::format::format_rational(&sd.tail_epsilon),
        "n_prime": n1.to_string(),
        "n_double_prime": n2.to_string(),
        "modulus_c1_lower": crate::lrs::format::format_rational(&c_lo),
        "modulus_c1_upper": crate::lrs::format::format_rational(&abs_hi(&ccd.c1)),
        "log_lower": crate::lrs::format::format_rational(&ln_lo(&c_lo)),
        "threshold_log10": log10,
    })];
    Ok((SymbolicThreshold { expression, value, log10 }, trace))
}

/// `ln(2n+1)` for reporting.
pub fn ln_2n1(n: u64) -> Interval {
    ln_rational(&BigRational::from_integer(BigInt::from(2 * n + 1)), 64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::interval::ratio;

    #[test]
    fn exponent_for_degree_two() {
        assert_eq!(degree_factor(2).to_string(), "68078861925529707085824");
        let p = BakerParams::new(2, BigRational::one());
        assert_eq!(p.exponent(), BigRational::from_integer(degree_factor(2)));
        let b1 = BakerBound { params: p.clone(), n: BigInt::one() };
        assert_eq!(b1.expression(), "(3)^-((1)^2 * (48*2^2)^10)");
        let b2 = BakerBound { params: p, n: BigInt::from(2) };
        assert_eq!(b2.is_smaller_than(&b1), Some(true));
        assert_eq!(b1.is_smaller_than(&b2), Some(false));
    }

    #[test]
    fn params_and_m() {
        let lam = AlgebraicNumber::gaussian(&ratio(3, 5), &ratio(4, 5));
        let c = AlgebraicNumber::from_i64(-1);
        let p = baker_params(&lam, &c).unwrap();
        assert_eq!(p.degree, 2);
        // height of 5x^2 - 6x + 5 is 6
        assert!(p.log_height > ratio(17, 10) && p.log_height < ratio(18, 10));
        assert_eq!(m_bound(&lam, &c, 1000).unwrap(), None);
        assert!(baker_params(&AlgebraicNumber::i(), &c).is_err());
        // lambda^1 = -|c|/c for c = -lambda^-1 ... c = -conj(lambda)
        let c2 = lam.conj().neg();
        assert_eq!(m_bound(&lam, &c2, 100).unwrap(), Some(1));
    }

    #[test]
    fn log_inequality() {
        // n > 2*ln(2n+1) first at n = 6? check against direct f64 scan
        let n = solve_log_inequality(&ratio(1, 1), &ratio(1, 1), &ratio(0, 1), &BigInt::from(2));
        let direct = (2u64..).find(|&k| k as f64 > 2.0 * ((2 * k + 1) as f64).ln()).unwrap();
        assert_eq!(n, BigInt::from(direct));
    }
}
