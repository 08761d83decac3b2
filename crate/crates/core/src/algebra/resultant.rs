//! Resultants, including the bivariate constructions behind algebraic arithmetic.
//!
//! Bivariate resultants `Res_y(p(y), q(x, y))` are computed by evaluating at
//! integer points `x`, taking Sylvester determinants, and interpolating.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::det_bareiss;
use super::poly::IntPoly;

/// Sylvester determinant of two coefficient vectors (lowest first) of formal
/// degrees `a.len()-1` and `b.len()-1`.
pub fn sylvester_resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (j, c) in a.iter().rev().enumerate() {
            mat[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in b.iter().rev().enumerate() {
            mat[n + i][i + j] = c.clone();
        }
    }
    det_bareiss(&mat)
}

pub fn resultant(p: &IntPoly, q: &IntPoly) -> BigInt {
    if p.is_zero() || q.is_zero() {
        return BigInt::zero();
    }
    sylvester_resultant(p.coeffs(), q.coeffs())
}

fn padded(p: &IntPoly, deg: usize) -> Vec<BigInt> {
    (0..=deg).map(|i| p.coeff(i)).collect()
}

/// Interpolate the polynomial of degree `<= deg` through `(x_i, y_i)`.
pub fn interpolate(xs: &[BigInt], ys: &[BigInt]) -> IntPoly {
    let n = xs.len();
    let mut dd: Vec<BigRational> = ys.iter().map(|y| BigRational::from_integer(y.clone())).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = &dd[i] - &dd[i - 1];
            let den = BigRational::from_integer(&xs[i] - &xs[i - j]);
            dd[i] = num / den;
        }
    }
    // expand Newton form
    let mut acc: Vec<BigRational> = vec![];
    for i in (0..n).rev() {
        // acc = acc * (x - xs[i]) + dd[i]
        let mut next = vec![BigRational::zero(); acc.len() + 1];
        for (k, a) in acc.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= a * BigRational::from_integer(xs[i].clone());
        }
        next[0] += &dd[i];
        acc = next;
    }
    let coeffs: Vec<BigInt> = acc
        .into_iter()
        .map(|c| {
            assert!(c.is_integer(), "non-integral interpolation of an integer resultant");
            c.to_integer()
        })
        .collect();
    IntPoly::new(coeffs)
}

/// `Res_y(p(y), Q_x(y))` as a polynomial in `x` of degree at most `deg_bound`,
/// where `q_at(x)` returns the coefficients of `Q_x` (fixed formal degree).
pub fn bivariate<F>(p: &IntPoly, q_at: F, deg_bound: usize) -> IntPoly
where
    F: Fn(&BigInt) -> Vec<BigInt>,
{
    let half = (deg_bound / 2) as i64;
    let xs: Vec<BigInt> = (0..=deg_bound as i64).map(|i| BigInt::from(i - half)).collect();
    let ys: Vec<BigInt> = xs.iter().map(|x| sylvester_resultant(p.coeffs(), &q_at(x))).collect();
    interpolate(&xs, &ys)
}

/// Vanishes at every `alpha + beta`: `Res_y(p(y), q(x - y))`.
pub fn sum_poly(p: &IntPoly, q: &IntPoly) -> IntPoly {
    let n = q.degree();
    bivariate(
        p,
        |x| padded(&q.compose(&IntPoly::new(vec![x.clone(), -BigInt::one()])), n),
        p.degree() * n,
    )
}

/// Vanishes at every `alpha * beta`: `Res_y(p(y), y^n q(x / y))`.
pub fn product_poly(p: &IntPoly, q: &IntPoly) -> IntPoly {
    let n = q.degree();
    bivariate(
        p,
        |x| {
            let mut c = vec![BigInt::zero(); n + 1];
            let mut pw = BigInt::one();
            for i in 0..=n {
                c[n - i] = q.coeff(i) * &pw;
                pw *= x;
            }
            c
        },
        p.degree() * n,
    )
}

/// Vanishes at every `alpha / beta` (`beta != 0`): `Res_y(q(y), p(x y))`.
pub fn quotient_poly(p: &IntPoly, q: &IntPoly) -> IntPoly {
    let m = p.degree();
    bivariate(q, |x| padded(&p.scale_x(x), m), p.degree() * q.degree())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{Dyadic, Interval};

    #[test]
    fn plain_resultant() {
        // Res(x^2 - 1, x - 2) = 3 up to sign
        let r = resultant(&IntPoly::from_i64(&[-1, 0, 1]), &IntPoly::from_i64(&[-2, 1]));
        assert_eq!(r.magnitude(), &num_bigint::BigUint::from(3u32));
        assert!(resultant(&IntPoly::from_i64(&[-1, 0, 1]), &IntPoly::from_i64(&[-1, 1])).is_zero());
    }

    #[test]
    fn sum_of_sqrt2_with_itself_vanishes_at_2sqrt2() {
        let p = IntPoly::from_i64(&[-2, 0, 1]);
        let s = sum_poly(&p, &p);
        assert_eq!(s.degree(), 4);
        let r2 = Interval::from_i64(2).sqrt(200);
        let v = s.eval_interval(&r2.scale_pow2(1), 200);
        assert!(v.contains_zero());
        let off = s.eval_interval(&Interval::point(Dyadic::from_f64(2.9)), 64);
        assert!(!off.contains_zero());
    }

    #[test]
    fn products_and_quotients() {
        let p = IntPoly::from_i64(&[-2, 0, 1]);
        let q = IntPoly::from_i64(&[-3, 0, 1]);
        let m = product_poly(&p, &q);
        assert!(m.eval_int(&BigInt::zero()) != BigInt::zero());
        // sqrt6 is a root: m(x) is a power of x^2 - 6
        assert_eq!(m.primitive(), IntPoly::from_i64(&[-6, 0, 1]).pow(2));
        let d = quotient_poly(&IntPoly::from_i64(&[-6, 1]), &IntPoly::from_i64(&[-3, 1]));
        assert_eq!(d.primitive(), IntPoly::from_i64(&[-2, 1]));
    }
}
