//! Sign of the minimum of `a + 2 Re(c1 z1) + 2 Re(c2 z2)` over the closure
//! of `{(lambda1^n, lambda2^n)}`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::algebra::algebraic::{isolate_roots, AlgebraicNumber};
use crate::algebra::IntPoly;
use crate::error::{Error, Result};
use crate::numeric::interval::{cos_interval, pi, sin_interval};
use crate::numeric::{CBox, Dyadic, Interval};
use crate::relations::RelationBasis;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TorusSign {
    Negative,
    Zero,
    Positive,
    /// The minimum could not be separated from zero.
    Undetermined,
}

/// `e^(2 pi i k / g)` as an algebraic number.
pub fn root_of_unity(g: u64, k: u64) -> Result<AlgebraicNumber> {
    let k = k % g;
    if k == 0 {
        return Ok(AlgebraicNumber::one());
    }
    if 2 * k == g {
        return Ok(AlgebraicNumber::from_i64(-1));
    }
    if 4 * k == g {
        return Ok(AlgebraicNumber::i());
    }
    if 4 * k == 3 * g {
        return Ok(AlgebraicNumber::i().neg());
    }
    let mut c = vec![BigInt::zero(); g as usize + 1];
    c[0] = BigInt::from(-1);
    c[g as usize] = BigInt::from(1);
    let t = std::f64::consts::TAU * k as f64 / g as f64;
    let (re, im) = (t.cos(), t.sin());
    let roots = isolate_roots(&IntPoly::new(c))?;
    roots
        .into_iter()
        .min_by(|a, b| {
            let (ar, ai) = a.to_f64();
            let (br, bi) = b.to_f64();
            let da = (ar - re).hypot(ai - im);
            let db = (br - re).hypot(bi - im);
            da.partial_cmp(&db).unwrap_or(Ordering::Equal)
        })
        .ok_or_else(|| Error::Internal("no root of unity found".into()))
}

/// Exact sign of `a - 2|d1| - 2|d2|` for real `a`.
fn sign_a_minus(a: &AlgebraicNumber, ds: &[&AlgebraicNumber]) -> Result<TorusSign> {
    // numeric first
    let mut bits = 64i64;
    while bits <= 1024 {
        let p = bits as u32 + 32;
        let mut v = a.approx(bits).re;
        for d in ds {
            v = v.sub(&d.approx(bits).abs(p).scale_pow2(1), p);
        }
        match v.sign() {
            Some(s) if s > 0 => return Ok(TorusSign::Positive),
            Some(s) if s < 0 => return Ok(TorusSign::Negative),
            _ => {}
        }
        bits *= 2;
    }
    let mut s = a.clone();
    for d in ds {
        s = s.sub(&d.abs().mul_rational(&BigRational::from_integer(2.into())));
    }
    Ok(match s.sign()? {
        x if x > 0 => TorusSign::Positive,
        0 => TorusSign::Zero,
        _ => TorusSign::Negative,
    })
}

/// `(x, y)` with `p*x + q*y = 1` for coprime `p, q`.
fn bezout(p: i64, q: i64) -> (i64, i64) {
    let e = p.extended_gcd(&q);
    let s = if e.gcd < 0 { -1 } else { 1 };
    (e.x * s, e.y * s)
}

fn combine(sign: TorusSign, acc: TorusSign) -> TorusSign {
    use TorusSign::*;
    match (acc, sign) {
        (Negative, _) | (_, Negative) => Negative,
        (Undetermined, _) | (_, Undetermined) => Undetermined,
        (Zero, _) | (_, Zero) => Zero,
        _ => Positive,
    }
}

/// Sign of the minimum of the objective on the orbit closure.
pub fn torus_min_sign(a: &AlgebraicNumber, c1: &AlgebraicNumber, c2: &AlgebraicNumber, basis: &RelationBasis) -> Result<TorusSign> {
    match basis.vectors.len() {
        0 => sign_a_minus(a, &[c1, c2]),
        1 => {
            let v = &basis.vectors[0];
            let g = v[0].gcd(&v[1]);
            if g == 0 {
                return sign_a_minus(a, &[c1, c2]);
            }
            let (mut p, mut q) = (v[0] / g, v[1] / g);
            if p < 0 || (p == 0 && q < 0) {
                p = -p;
                q = -q;
            }
            let (s, t) = bezout(p, q);
            let g = g.unsigned_abs();
            let mut acc = TorusSign::Positive;
            for k in 0..g {
                let e1 = root_of_unity(g, (s.rem_euclid(g as i64) as u64) * k % g)?;
                let e2 = root_of_unity(g, (t.rem_euclid(g as i64) as u64) * k % g)?;
                let (k1, k2) = (c1.mul(&e1), c2.mul(&e2));
                // z1 = e1 w^-q, z2 = e2 w^p on |w| = 1
                let sign = component_sign(a, &k1, &k2, -q, p)?;
                acc = combine(sign, acc);
                if acc == TorusSign::Negative {
                    break;
                }
            }
            Ok(acc)
        }
        _ => {
            // the closure is finite: all points are orbit points
            Err(Error::Precondition("relation lattice of rank 2 has no dominant pair".into()))
        }
    }
}

/// Minimum sign of `a + 2Re(k1 w^e1 + k2 w^e2)` over `|w| = 1`.
fn component_sign(a: &AlgebraicNumber, k1: &AlgebraicNumber, k2: &AlgebraicNumber, e1: i64, e2: i64) -> Result<TorusSign> {
    if e1 == e2 {
        return sign_a_minus(a, &[&k1.add(k2)]);
    }
    if e1 == -e2 {
        return sign_a_minus(a, &[&k1.conj().add(k2)]);
    }
    if e1 == 0 {
        return sign_a_minus(&a.add(&k1.re().mul_rational(&BigRational::from_integer(2.into()))), &[k2]);
    }
    if e2 == 0 {
        return sign_a_minus(&a.add(&k2.re().mul_rational(&BigRational::from_integer(2.into()))), &[k1]);
    }
    Ok(branch_and_bound(a, k1, k2, e1, e2))
}

struct Objective {
    a: Interval,
    k1: CBox,
    k2: CBox,
    e1: i64,
    e2: i64,
    /// Bound on the second derivative.
    m2: Dyadic,
    prec: u32,
}

impl Objective {
    fn unit(&self, x: &Interval) -> CBox {
        CBox::new(cos_interval(x, self.prec), sin_interval(x, self.prec))
    }

    /// Enclosures of `f(phi)` and `f'(phi)`.
    fn eval(&self, phi: &Interval) -> (Interval, Interval) {
        let p = self.prec;
        let z1 = self.unit(&phi.mul_int(&BigInt::from(self.e1), p));
        let z2 = self.unit(&phi.mul_int(&BigInt::from(self.e2), p));
        let t1 = self.k1.mul(&z1, p);
        let t2 = self.k2.mul(&z2, p);
        let f = self.a.add(&t1.re.add(&t2.re, p).scale_pow2(1), p);
        // d/dphi Re(k e^{i e phi}) = -e Im(k e^{i e phi})
        let d1 = t1.im.mul_int(&BigInt::from(-self.e1), p);
        let d2 = t2.im.mul_int(&BigInt::from(-self.e2), p);
        (f, d1.add(&d2, p).scale_pow2(1))
    }
}

/// Certified minimization over `phi in [0, 2 pi]` with second-order bounds.
fn branch_and_bound(a: &AlgebraicNumber, k1: &AlgebraicNumber, k2: &AlgebraicNumber, e1: i64, e2: i64) -> TorusSign {
    for bits in [64i64, 128, 256] {
        let prec = bits as u32 + 32;
        let kb1 = k1.approx(bits);
        let kb2 = k2.approx(bits);
        let m2 = kb1
            .abs(prec)
            .mul_int(&BigInt::from(e1 * e1), prec)
            .add(&kb2.abs(prec).mul_int(&BigInt::from(e2 * e2), prec), prec)
            .scale_pow2(1)
            .hi;
        let obj = Objective { a: a.approx(bits).re, k1: kb1, k2: kb2, e1, e2, m2, prec };
        let two_pi = pi(prec).scale_pow2(1);
        let pieces = 64 * (e1.unsigned_abs() + e2.unsigned_abs()) as i64;
        let mut stack: Vec<(Dyadic, Dyadic)> = vec![];
        // interval endpoints are the rational points j/pieces of the circle
        for j in 0..pieces {
            let lo = two_pi.lo.mul_int(&BigInt::from(j)).div(&Dyadic::from_i64(pieces), prec, crate::numeric::Round::Down);
            let hi = two_pi.hi.mul_int(&BigInt::from(j + 1)).div(&Dyadic::from_i64(pieces), prec, crate::numeric::Round::Up);
            stack.push((lo, hi));
        }
        let mut budget = 2_000_000u64;
        let mut unresolved = false;
        while let Some((lo, hi)) = stack.pop() {
            budget -= 1;
            if budget == 0 {
                unresolved = true;
                break;
            }
            let mid = lo.add(&hi).mul_pow2(-1);
            let h = hi.sub(&lo).mul_pow2(-1);
            let (f, df) = obj.eval(&Interval::point(mid.clone()));
            if f.hi.signum() < 0 {
                return TorusSign::Negative;
            }
            // f >= f(mid) - |f'(mid)| h - m2 h^2 / 2
            let hh = Interval::point(h.clone());
            let drop = df.abs().mul(&hh, prec).add(&Interval::point(obj.m2.clone()).mul(&hh.sqr(prec), prec).scale_pow2(-1), prec);
            let lower = f.sub(&drop, prec);
            if lower.lo.signum() > 0 {
                continue;
            }
            if h.magnitude() < -(bits / 2) {
                unresolved = true;
                continue;
            }
            stack.push((lo, mid.clone()));
            stack.push((mid, hi));
        }
        if !unresolved {
            return TorusSign::Positive;
        }
    }
    TorusSign::Undetermined
}

/// Dense-grid estimate of the minimum on a rank-1 torus component family.
pub fn grid_minimum(a: f64, c1: (f64, f64), c2: (f64, f64), basis: &RelationBasis, points: u64) -> f64 {
    let (r1, a1) = (c1.0.hypot(c1.1), c1.1.atan2(c1.0));
    let (r2, a2) = (c2.0.hypot(c2.1), c2.1.atan2(c2.0));
    let tau = std::f64::consts::TAU;
    match basis.vectors.first() {
        None => {
            let side = (points as f64).sqrt().ceil() as u64;
            let mut m = f64::INFINITY;
            for i in 0..side {
                for j in 0..side {
                    let t1 = tau * i as f64 / side as f64;
                    let t2 = tau * j as f64 / side as f64;
                    m = m.min(a + 2.0 * r1 * (a1 + t1).cos() + 2.0 * r2 * (a2 + t2).cos());
                }
            }
            m
        }
        Some(v) => {
            let g = v[0].gcd(&v[1]).max(1);
            let (mut p, mut q) = (v[0] / g, v[1] / g);
            if p < 0 {
                p = -p;
                q = -q;
            }
            let (s, t) = bezout(p, q);
            let per = (points / g as u64).max(1);
            let mut m = f64::INFINITY;
            for k in 0..g {
                let off = tau * k as f64 / g as f64;
                for j in 0..per {
                    let phi = tau * j as f64 / per as f64;
                    let t1 = -(q as f64) * phi + s as f64 * off;
                    let t2 = p as f64 * phi + t as f64 * off;
                    m = m.min(a + 2.0 * r1 * (a1 + t1).cos() + 2.0 * r2 * (a2 + t2).cos());
                }
            }
            m
        }
    }
}

/// Certified resolution of [`grid_minimum`]: the grid minimum exceeds the
/// true minimum by at most this much.
pub fn grid_resolution(c1: (f64, f64), c2: (f64, f64), basis: &RelationBasis, points: u64) -> f64 {
    let (r1, r2) = (c1.0.hypot(c1.1), c2.0.hypot(c2.1));
    let tau = std::f64::consts::TAU;
    match basis.vectors.first() {
        None => {
            let side = (points as f64).sqrt().ceil();
            let h = tau / side / 2.0;
            2.0 * (r1 + r2) * h * h / 2.0 + 1e-9
        }
        Some(v) => {
            let g = v[0].gcd(&v[1]).max(1);
            let (p, q) = ((v[0] / g).abs() as f64, (v[1] / g).abs() as f64);
            let per = (points / g as u64).max(1) as f64;
            let h = tau / per / 2.0;
            // near a minimizer f' = 0, so the error is quadratic
            2.0 * (r1 * q * q + r2 * p * p) * h * h / 2.0 + 1e-9
        }
    }
}

/// Sign of a real algebraic number compared with zero, as a torus sign.
pub fn sign_of(x: &AlgebraicNumber) -> Result<TorusSign> {
    Ok(match x.sign()?.cmp(&0) {
        Ordering::Greater => TorusSign::Positive,
        Ordering::Equal => TorusSign::Zero,
        Ordering::Less => TorusSign::Negative,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::interval::ratio;

    fn basis(v: &[Vec<i64>]) -> RelationBasis {
        RelationBasis { m: 2, vectors: v.to_vec() }
    }

    #[test]
    fn rank_zero() {
        let one = AlgebraicNumber::one();
        assert_eq!(torus_min_sign(&AlgebraicNumber::from_i64(5), &one, &one, &basis(&[])).unwrap(), TorusSign::Positive);
        assert_eq!(torus_min_sign(&AlgebraicNumber::from_i64(4), &one, &one, &basis(&[])).unwrap(), TorusSign::Zero);
        assert_eq!(torus_min_sign(&AlgebraicNumber::from_i64(3), &one, &one, &basis(&[])).unwrap(), TorusSign::Negative);
        // |c| = 5 and 1, Gaussian: 12 - 10 - 2 = 0
        let c = AlgebraicNumber::gaussian(&ratio(3, 1), &ratio(4, 1));
        assert_eq!(torus_min_sign(&AlgebraicNumber::from_i64(12), &c, &one, &basis(&[])).unwrap(), TorusSign::Zero);
    }

    #[test]
    fn rank_one() {
        let one = AlgebraicNumber::one();
        let zero = AlgebraicNumber::zero();
        // lambda2 = lambda1: objective 4 cos phi
        assert_eq!(torus_min_sign(&zero, &one, &one, &basis(&[vec![1, -1]])).unwrap(), TorusSign::Negative);
        // (4,4): z1 z2 is a 4th root of unity; (-1, -1) lies on the torus
        let b44 = basis(&[vec![4, 4]]);
        let s = torus_min_sign(&AlgebraicNumber::from_i64(3), &one, &one, &b44).unwrap();
        let m = grid_minimum(3.0, (1.0, 0.0), (1.0, 0.0), &b44, 1_000_000);
        assert!((m + 1.0).abs() < 1e-6, "{m}");
        assert_eq!(s, TorusSign::Negative);
        assert_eq!(torus_min_sign(&AlgebraicNumber::from_i64(4), &one, &one, &b44).unwrap(), TorusSign::Zero);
        assert_eq!(torus_min_sign(&AlgebraicNumber::from_i64(5), &one, &one, &b44).unwrap(), TorusSign::Positive);
        // 4 + 2 cos(2phi) + 2 cos(phi): two frequencies, minimum 4 - 2.25 > 0
        let s = torus_min_sign(&AlgebraicNumber::from_i64(2), &one, &one, &basis(&[vec![1, -2]])).unwrap();
        let m = grid_minimum(2.0, (1.0, 0.0), (1.0, 0.0), &basis(&[vec![1, -2]]), 100_000);
        assert!(m < 0.0);
        assert_eq!(s, TorusSign::Negative);
        let s = torus_min_sign(&AlgebraicNumber::from_i64(3), &one, &one, &basis(&[vec![1, -2]])).unwrap();
        assert_eq!(s, TorusSign::Positive);
    }

    #[test]
    fn roots_of_unity() {
        let z = root_of_unity(8, 1).unwrap();
        assert_eq!(z.pow(8), AlgebraicNumber::one());
        let (re, im) = z.to_f64();
        assert!((re - 0.5f64.sqrt()).abs() < 1e-9 && (im - 0.5f64.sqrt()).abs() < 1e-9);
    }
}
