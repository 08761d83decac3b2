//! Order-6 sequences tied to Diophantine approximation of `arg(p + qi) / 2pi`.
//!
//! Everything here is finite-horizon evidence: the Lagrange constant and the
//! type of these numbers are not known to be computable.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::algebra::algebraic::AlgebraicNumber;
use crate::error::{Error, Result};
use crate::lrs::format::format_rational;
use crate::lrs::RawLrs;
use crate::numeric::interval::pi;
use crate::numeric::{CBox, Dyadic, Interval, Round};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// A rational point on the unit circle off the axes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CirclePoint {
    pub p: BigRational,
    pub q: BigRational,
}

impl CirclePoint {
    pub fn new(p: BigRational, q: BigRational) -> Result<Self> {
        if &p * &p + &q * &q != BigRational::one() {
            return Err(Error::Precondition("point is not on the unit circle".into()));
        }
        if p.is_zero() || q.is_zero() {
            return Err(Error::Precondition("points on the axes are excluded".into()));
        }
        Ok(CirclePoint { p, q })
    }

    /// `p + qi` as an algebraic number (root of `x^2 - 2px + 1`).
    pub fn algebraic(&self) -> AlgebraicNumber {
        AlgebraicNumber::gaussian(&self.p, &self.q)
    }

    /// `(cos n theta, sin n theta)` exactly.
    pub fn power(&self, n: u64) -> (BigRational, BigRational) {
        // binary powering of (a + bi) / c with integer parts
        let c = self.p.denom().lcm(self.q.denom());
        let a = self.p.numer() * (&c / self.p.denom());
        let b = self.q.numer() * (&c / self.q.denom());
        let (mut rr, mut ri) = (BigInt::one(), BigInt::zero());
        let (mut br, mut bi) = (a, b);
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                let t = &rr * &br - &ri * &bi;
                ri = &rr * &bi + &ri * &br;
                rr = t;
            }
            let t = &br * &br - &bi * &bi;
            bi = BigInt::from(2) * &br * &bi;
            br = t;
            e >>= 1;
        }
        let d = num_traits::pow(c, n as usize);
        (BigRational::new(rr, d.clone()), BigRational::new(ri, d))
    }

    /// Enclosure of `t = arg(p + qi) / 2pi`.
    pub fn turn(&self, prec: u32) -> Interval {
        let z = CBox::new(Interval::from_rational(&self.p, prec + 16), Interval::from_rational(&self.q, prec + 16));
        let a = z.arg(prec + 8).expect("point off the origin");
        a.div(&pi(prec + 8).scale_pow2(1), prec).unwrap()
    }

    pub fn to_json(&self) -> Value {
        json!({"p": format_rational(&self.p), "q": format_rational(&self.q)})
    }
}

/// `((1 - s^2) / (1 + s^2), 2s / (1 + s^2))`.
pub fn circle_point(s: &BigRational) -> Result<CirclePoint> {
    if s.is_zero() {
        return Err(Error::Precondition("parameter must be nonzero".into()));
    }
    let one = BigRational::one();
    let den = &one + s * s;
    CirclePoint::new((&one - s * s) / &den, BigRational::from_integer(2.into()) * s / &den)
}

/// The pair `u_n = r sin(n theta) - n(1 - cos(n theta))`, `v_n` with `-r`.
#[derive(Clone, Debug)]
pub struct HardnessPair {
    pub u: RawLrs,
    pub v: RawLrs,
    pub r: BigRational,
    pub point: CirclePoint,
}

/// Coefficients of `(x - 1)^2 (x^2 - 2px + 1)^2` in recurrence form.
pub fn recurrence_coeffs(p: &BigRational) -> Vec<BigRational> {
    let mul = |a: &[BigRational], b: &[BigRational]| {
        let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    };
    let one = BigRational::one();
    let lin = vec![-one.clone(), one.clone()];
    let quad = vec![one.clone(), -BigRational::from_integer(2.into()) * p, one.clone()];
    let c = mul(&mul(&lin, &lin), &mul(&quad, &quad));
    // x^6 = a1 x^5 + ... + a6
    (0..6).map(|i| -c[5 - i].clone()).collect()
}

/// Closed form `(u_n, v_n)`.
pub fn closed_form(point: &CirclePoint, r: &BigRational, n: u64) -> (BigRational, BigRational) {
    let (c, s) = point.power(n);
    let damp = BigRational::from_integer(n.into()) * (BigRational::one() - c);
    (r * &s - &damp, -(r * &s) - damp)
}

pub fn hardness_lrs(point: &CirclePoint, r: &BigRational) -> Result<HardnessPair> {
    if !r.is_positive() {
        return Err(Error::Precondition("r must be positive".into()));
    }
    let coeffs = recurrence_coeffs(&point.p);
    let (mut iu, mut iv) = (vec![], vec![]);
    for n in 0..6 {
        let (a, b) = closed_form(point, r, n);
        iu.push(a);
        iv.push(b);
    }
    Ok(HardnessPair {
        u: RawLrs::new(coeffs.clone(), iu)?,
        v: RawLrs::new(coeffs, iv)?,
        r: r.clone(),
        point: point.clone(),
    })
}

/// `w_n = max(u_n, v_n) = r|sin(n theta)| - n(1 - cos(n theta))`.
pub fn w_term(pair: &HardnessPair, n: u64) -> BigRational {
    let (a, b) = closed_form(&pair.point, &pair.r, n);
    a.max(b)
}

/// `delta = min(eps, 1/2)` and the least `N` with `2r/N <= 1 - cos(delta)`
/// certified through `1 - cos x >= x^2/2 - x^4/24`.
pub fn delta_and_n(r: &BigRational, eps: &BigRational) -> Result<(BigRational, u64)> {
    let half = q(1, 2);
    if !eps.is_positive() || eps >= &BigRational::one() {
        return Err(Error::Precondition("epsilon must lie in (0, 1)".into()));
    }
    let d = if eps < &half { eps.clone() } else { half };
    // sin x >= x - x^3/6 >= (1 - eps) x needs d^2 <= 6 eps
    // 1 - cos x >= x^2/2 - x^4/24 >= (1 - eps) x^2 / 2 needs d^2 <= 12 eps
    if &d * &d > BigRational::from_integer(6.into()) * eps {
        return Err(Error::Internal("delta too large for the sine bound".into()));
    }
    let d2 = &d * &d;
    let cos_gap = &d2 / BigRational::from_integer(2.into()) - &d2 * &d2 / BigRational::from_integer(24.into());
    let two_r = BigRational::from_integer(2.into()) * r;
    let a = (&two_r / &d).ceil().to_integer();
    let b = (&two_r / &cos_gap).ceil().to_integer();
    let n = a.max(b).max(BigInt::one());
    let n = n.to_u64().ok_or_else(|| Error::Precondition("N does not fit in 64 bits".into()))?;
    Ok((d, n))
}

/// `[x]_{2 pi}` for an enclosure of a principal-range angle.
fn dist_2pi(a: &Interval, prec: u32) -> Interval {
    let pi_i = pi(prec);
    if a.hi <= pi_i.lo {
        return a.abs();
    }
    let two_pi = pi_i.scale_pow2(1);
    let alt = two_pi.sub(a, prec);
    if a.lo >= pi_i.hi {
        return alt;
    }
    a.abs().min_with(&alt)
}

/// Iterates `z_m = (p + qi)^m` as certified boxes.
struct Rotor {
    z: CBox,
    step: CBox,
    prec: u32,
    m: u64,
}

impl Rotor {
    fn new(point: &CirclePoint, prec: u32) -> Self {
        let step = CBox::new(Interval::from_rational(&point.p, prec + 96), Interval::from_rational(&point.q, prec + 96));
        Rotor { z: CBox::one(), step, prec, m: 0 }
    }

    fn advance(&mut self) {
        self.m += 1;
        // box products wrap by up to sqrt(2) per step
        self.z = if self.m % 32 == 0 {
            self.step.pow(self.m, self.prec + 32)
        } else {
            self.z.mul(&self.step, self.prec + 32)
        };
    }
}

/// Per-r outcome of the scan.
#[derive(Clone, Debug, PartialEq)]
pub struct RScan {
    pub r: BigRational,
    /// First `m` in the window with `w_m > 0`.
    pub positive_at: Option<u64>,
}

/// Finite-horizon bracket for `min_{N <= m <= horizon} m [m theta]_{2pi} / 2pi`,
/// the window quantity behind the Lagrange constant.
#[derive(Clone, Debug)]
pub struct LagrangeBracket {
    pub lower: f64,
    pub upper: Option<f64>,
    pub n: u64,
    pub horizon: u64,
    pub epsilon: BigRational,
    pub scans: Vec<RScan>,
    pub finite_horizon: bool,
}

/// Exact sign of `w_m` at a single index.
fn w_sign_exact(point: &CirclePoint, r: &BigRational, m: u64) -> i32 {
    let (c, s) = point.power(m);
    let w = r * s.abs() - BigRational::from_integer(m.into()) * (BigRational::one() - c);
    if w.is_positive() {
        1
    } else if w.is_zero() {
        0
    } else {
        -1
    }
}

pub fn lagrange_bracket(point: &CirclePoint, r_grid: &[BigRational], eps: &BigRational, horizon: u64) -> Result<LagrangeBracket> {
    if r_grid.is_empty() {
        return Err(Error::Precondition("empty r grid".into()));
    }
    let mut n_max = 1;
    for r in r_grid {
        if !r.is_positive() {
            return Err(Error::Precondition("r must be positive".into()));
        }
        n_max = n_max.max(delta_and_n(r, eps)?.1);
    }
    if horizon < n_max {
        return Err(Error::Precondition(format!("horizon {horizon} is below the required N = {n_max}")));
    }
    let prec = 128;
    // w_m > 0 iff r > m (1 - cos) / |sin|; track the least such ratio
    let mut rotor = Rotor::new(point, prec);
    let mut first_below: Vec<Option<u64>> = vec![None; r_grid.len()];
    let mut order: Vec<usize> = (0..r_grid.len()).collect();
    order.sort_by(|&a, &b| r_grid[b].cmp(&r_grid[a]));
    let r_hi: Vec<Dyadic> = r_grid.iter().map(|r| Dyadic::from_rational(r, 64, Round::Up)).collect();
    let r_lo: Vec<Dyadic> = r_grid.iter().map(|r| Dyadic::from_rational(r, 64, Round::Down)).collect();
    let top = r_hi[order[0]].clone();
    while rotor.m < horizon {
        rotor.advance();
        let m = rotor.m;
        if m < n_max {
            continue;
        }
        let damp = Interval::one().sub(&rotor.z.re, prec).mul_int(&BigInt::from(m), prec);
        let sa = rotor.z.im.abs();
        // w_m = r |s| - damp is negative for every r in the grid
        if sa.hi.mul(&top).sub(&damp.lo).signum() < 0 {
            continue;
        }
        for &i in &order {
            if first_below[i].is_some() {
                continue;
            }
            let w_lo = sa.lo.mul(&r_lo[i]).sub(&damp.hi);
            let w_hi = sa.hi.mul(&r_hi[i]).sub(&damp.lo);
            if w_hi.signum() < 0 {
                // smaller r only make w smaller
                break;
            }
            if w_lo.signum() > 0 || w_sign_exact(point, &r_grid[i], m) > 0 {
                first_below[i] = Some(m);
            }
        }
        if first_below.iter().all(|f| f.is_some()) {
            break;
        }
    }
    let one = BigRational::one();
    let pi_i = pi(96);
    let mut lower = 0.0f64;
    let mut upper: Option<f64> = None;
    let mut scans = vec![];
    for (r, f) in r_grid.iter().zip(&first_below) {
        match f {
            None => {
                // no positive term: every m in the window has m[m theta] >= 2r(1 - eps)
                let v = Interval::from_rational(&(r * (&one - eps)), 96).div(&pi_i, 96).unwrap().lo.to_f64();
                lower = lower.max(v);
            }
            Some(_) => {
                // a positive term forces m[m theta] < 2r / (1 - eps)
                let v = Interval::from_rational(&(r / (&one - eps)), 96).div(&pi_i, 96).unwrap().hi.to_f64();
                upper = Some(upper.map_or(v, |u: f64| u.min(v)));
            }
        }
        scans.push(RScan { r: r.clone(), positive_at: *f });
    }
    Ok(LagrangeBracket { lower, upper, n: n_max, horizon, epsilon: eps.clone(), scans, finite_horizon: true })
}

/// Outcome of the type check.
#[derive(Clone, Debug, PartialEq)]
pub enum TypeCertificate {
    /// `L(t) >= r (1 - eps) / pi` up to the horizon.
    LowerBound { bound: f64, n: u64, horizon: u64 },
    /// `w_m > 0` at some `N <= m <= horizon`.
    PositiveTerm { m: u64 },
    /// Some `m < N` has `m [m theta] < 2r (1 - eps)`.
    SmallIndex { m: u64 },
}

pub fn type_bracket(point: &CirclePoint, r: &BigRational, eps: &BigRational, horizon: u64) -> Result<TypeCertificate> {
    let (_, n) = delta_and_n(r, eps)?;
    if horizon < n {
        return Err(Error::Precondition(format!("horizon {horizon} is below the required N = {n}")));
    }
    let prec = 128;
    let target = Interval::from_rational(&(BigRational::from_integer(2.into()) * r * (BigRational::one() - eps)), prec);
    let mut rotor = Rotor::new(point, prec);
    let r_hi = Dyadic::from_rational(r, 64, Round::Up);
    while rotor.m < horizon {
        rotor.advance();
        let m = rotor.m;
        if m < n {
            let a = rotor.z.arg(prec).ok_or_else(|| Error::Internal("rotor box meets the origin".into()))?;
            let v = dist_2pi(&a, prec).mul_int(&BigInt::from(m), prec);
            if v.lo >= target.hi {
                continue;
            }
            return Ok(TypeCertificate::SmallIndex { m });
        }
        let damp = Interval::one().sub(&rotor.z.re, prec).mul_int(&BigInt::from(m), prec);
        let w_hi = rotor.z.im.abs().hi.mul(&r_hi).sub(&damp.lo);
        if w_hi.signum() < 0 {
            continue;
        }
        if w_sign_exact(point, r, m) > 0 {
            return Ok(TypeCertificate::PositiveTerm { m });
        }
    }
    let b = Interval::from_rational(&(r * (BigRational::one() - eps)), 96).div(&pi(96), 96).unwrap().lo.to_f64();
    Ok(TypeCertificate::LowerBound { bound: b, n, horizon })
}

/// Continued-fraction estimate of `min q_k |q_k t - p_k|` over convergents
/// with `from <= q_k <= horizon`.
#[derive(Clone, Debug)]
pub struct CfEstimate {
    pub value: f64,
    pub error: f64,
    pub argmin: u64,
    pub convergents: Vec<(BigInt, BigInt)>,
    /// The expansion terminated (rational input).
    pub terminated: bool,
}

pub fn cf_oracle_interval(t: &Interval, from: u64, horizon: u64, prec: u32) -> Result<CfEstimate> {
    let mut x = t.clone();
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let mut convergents = vec![];
    let mut best: Option<(Interval, u64)> = None;
    let mut terminated = false;
    let hz = BigInt::from(horizon);
    loop {
        let mut a = x.lo.floor();
        let mut last = false;
        if x.hi.floor() != a {
            // a narrow box around an integer: the expansion ends here
            a = x.hi.floor();
            if x.width().magnitude() > -(prec as i64) / 4 {
                return Err(Error::PrecisionExhausted { bits: prec });
            }
            last = true;
        }
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if q2 > hz {
            break;
        }
        let qi = Interval::from_int(&q2);
        let v = qi.mul(&qi.mul(t, prec).sub(&Interval::from_int(&p2), prec).abs(), prec);
        let qn = q2.to_u64().unwrap_or(u64::MAX);
        if qn >= from && best.as_ref().is_none_or(|(b, _)| v.mid() < b.mid()) {
            best = Some((v, qn));
        }
        convergents.push((p2.clone(), q2.clone()));
        let frac = x.sub(&Interval::from_int(&a), prec);
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        if last || frac.contains_zero() {
            terminated = true;
            break;
        }
        x = frac.recip(prec).ok_or(Error::PrecisionExhausted { bits: prec })?;
    }
    let (v, argmin) = best.ok_or_else(|| Error::Precondition("no convergent denominator in the window".into()))?;
    Ok(CfEstimate { value: v.mid().to_f64(), error: v.width().to_f64() / 2.0, argmin, convergents, terminated })
}

/// Oracle for `t = arg(p + qi) / 2pi`.
pub fn cf_oracle(point: &CirclePoint, from: u64, horizon: u64, precision_bits: u32) -> Result<CfEstimate> {
    cf_oracle_interval(&point.turn(precision_bits), from, horizon, precision_bits)
}

/// `t = (sqrt 5 - 1) / 2`, whose convergent values tend to `1/sqrt 5`.
pub fn golden_turn(prec: u32) -> Interval {
    Interval::from_i64(5).sqrt(prec).sub(&Interval::one(), prec).scale_pow2(-1)
}

/// The report printed by the command-line front end.
pub fn report(point: &CirclePoint, r_grid: &[BigRational], eps: &BigRational, horizon: u64, prec: u32) -> Result<Value> {
    let b = lagrange_bracket(point, r_grid, eps, horizon)?;
    let o = cf_oracle(point, b.n, horizon, prec)?;
    Ok(json!({
        "point": point.to_json(),
        "r": r_grid.iter().map(format_rational).collect::<Vec<_>>(),
        "epsilon": format_rational(eps),
        "n": b.n,
        "horizon": horizon,
        "bracket": [format!("{:.6}", b.lower), b.upper.map_or("inf".to_string(), |u| format!("{u:.6}"))],
        "finite_horizon": b.finite_horizon,
        "oracle": {"value": format!("{:.6}", o.value), "error": format!("{:.1e}", o.error), "argmin": o.argmin},
    }))
}

/// `r = j / 20` for `j = 1..=count`.
pub fn default_grid(count: i64) -> Vec<BigRational> {
    (1..=count).map(|j| q(j, 20)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points() {
        let pt = circle_point(&q(1, 2)).unwrap();
        assert_eq!((pt.p.clone(), pt.q.clone()), (q(3, 5), q(4, 5)));
        let pt = circle_point(&q(1, 3)).unwrap();
        assert_eq!((pt.p.clone(), pt.q.clone()), (q(4, 5), q(3, 5)));
        assert!(circle_point(&q(1, 1)).is_err());
        assert!(circle_point(&q(0, 1)).is_err());
    }

    #[test]
    fn first_terms() {
        let pt = circle_point(&q(1, 2)).unwrap();
        let pair = hardness_lrs(&pt, &q(1, 1)).unwrap();
        assert_eq!(pair.u.term(0), q(0, 1));
        assert_eq!(pair.u.term(1), q(2, 5));
        assert_eq!(pair.v.term(1), q(-6, 5));
        assert_eq!(w_term(&pair, 0), q(0, 1));
        assert_eq!(w_term(&pair, 1), q(2, 5));
        for n in 6..40 {
            assert_eq!(pair.u.term(n), closed_form(&pt, &q(1, 1), n).0);
        }
        assert!(pt.algebraic().is_root_of_unity().is_none());
    }

    #[test]
    fn thresholds() {
        let (d, n) = delta_and_n(&q(1, 1), &q(1, 10)).unwrap();
        assert_eq!(d, q(1, 10));
        // 2 / (1/200 - 1/240000)
        assert_eq!(n, 401);
        // 1 - cos(delta) really exceeds 2r/N
        let lhs = 1.0 - 0.1f64.cos();
        assert!(lhs > 2.0 / n as f64);
    }

    #[test]
    fn golden() {
        let t = golden_turn(128);
        let e = cf_oracle_interval(&t, 100, 100_000, 128).unwrap();
        assert!((e.value - 1.0 / 5f64.sqrt()).abs() < 1e-3, "{}", e.value);
        let r = Interval::from_rational(&q(3, 7), 128);
        let e = cf_oracle_interval(&r, 1, 1000, 128).unwrap();
        assert!(e.value.abs() < 1e-20);
    }

    #[test]
    fn bracket_contains_oracle() {
        let pt = circle_point(&q(1, 2)).unwrap();
        let b = lagrange_bracket(&pt, &default_grid(200), &q(1, 10), 100_000).unwrap();
        let o = cf_oracle(&pt, b.n, 100_000, 128).unwrap();
        let up = b.upper.unwrap();
        assert!(b.lower <= o.value + o.error && o.value - o.error <= up, "{} {} {}", b.lower, o.value, up);
        assert!(b.lower <= up);
        // large r turns positive quickly
        let big = lagrange_bracket(&pt, &[q(10, 1)], &q(1, 10), 100_000).unwrap();
        assert!(big.scans[0].positive_at.is_some());
    }

    #[test]
    fn type_checks() {
        let pt = circle_point(&q(1, 2)).unwrap();
        match type_bracket(&pt, &q(1, 100), &q(1, 10), 20_000).unwrap() {
            TypeCertificate::LowerBound { .. } => {}
            other => panic!("{other:?}"),
        }
        assert!(!matches!(type_bracket(&pt, &q(10, 1), &q(1, 10), 20_000).unwrap(), TypeCertificate::LowerBound { .. }));
    }
}
