//! Rational bounds on algebraic quantities and the small threshold solvers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::algebraic::AlgebraicNumber;
use crate::numeric::interval::{ln_rational, Interval};

const BITS: i64 = 64;

/// Rational lower bound on the real part.
pub fn re_lo(a: &AlgebraicNumber) -> BigRational {
    if let Some(q) = a.as_rational() {
        return q;
    }
    a.approx(BITS).re.lo.to_rational()
}

/// Rational upper bound on the modulus.
pub fn abs_hi(a: &AlgebraicNumber) -> BigRational {
    if let Some(q) = a.as_rational() {
        return q.abs();
    }
    a.approx(BITS).abs(BITS as u32 + 32).hi.to_rational()
}

/// Positive rational lower bound on the modulus of a nonzero number.
pub fn abs_lo(a: &AlgebraicNumber) -> BigRational {
    if let Some(q) = a.as_rational() {
        return q.abs();
    }
    let mut bits = BITS;
    loop {
        let lo = a.approx(bits).abs(bits as u32 + 32).lo;
        if lo.signum() > 0 {
            return lo.to_rational();
        }
        bits *= 2;
    }
}

/// Positive rational lower bound on `x - y` for reals with `x > y` known.
pub fn gap_lo(x: &AlgebraicNumber, y_scaled: &AlgebraicNumber, k: &BigRational) -> BigRational {
    // lower bound on x - k*|y|
    let mut bits = BITS;
    loop {
        let xb = x.approx(bits).re.lo.to_rational();
        let yb = y_scaled.approx(bits).abs(bits as u32 + 32).hi.to_rational();
        let g = xb - k * yb;
        if g.is_positive() {
            return g;
        }
        bits *= 2;
        if bits > 1 << 16 {
            return BigRational::zero();
        }
    }
}

/// Least `T` with `lead*n^e - sum_j rest[j]*n^j > 0` for all `n >= T` (Cauchy).
pub fn cauchy_threshold(lead: &BigRational, rest: &[BigRational]) -> BigInt {
    let m = rest.iter().cloned().fold(BigRational::zero(), |a, b| if b > a { b } else { a });
    if m.is_zero() {
        return BigInt::one();
    }
    (BigRational::one() + m / lead).floor().to_integer() + BigInt::one()
}

/// `base^n < target`, conservative (false when unsure).
fn geometric_ok(base: &BigRational, target: &BigRational, n: &BigInt) -> bool {
    if let Some(k) = n.to_usize().filter(|&k| k <= 4096) {
        return num_traits::pow(base.clone(), k) < *target;
    }
    let prec = 128;
    let lb = ln_rational(base, prec);
    let lt = ln_rational(target, prec);
    let lhs = lb.mul(&Interval::from_int(n), prec);
    lhs.hi < lt.lo
}

/// Least `n0` with `base^n < target` for every `n >= n0`; `0 < base < 1 ` and `target > 0`.
pub fn geometric_below(base: &BigRational, target: &BigRational) -> BigInt {
    if *target > BigRational::one() {
        return BigInt::zero();
    }
    let mut hi = BigInt::one();
    while !geometric_ok(base, target, &hi) {
        hi *= 2;
    }
    let mut lo = BigInt::zero();
    if geometric_ok(base, target, &lo) {
        return lo;
    }
    // invariant: !ok(lo), ok(hi)
    while &hi - &lo > BigInt::one() {
        let mid = (&lo + &hi) >> 1;
        if geometric_ok(base, target, &mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Ceiling of a nonnegative rational.
pub fn ceil_q(q: &BigRational) -> BigInt {
    let (d, r) = q.numer().div_rem(q.denom());
    if r.is_positive() {
        d + 1
    } else {
        d
    }
}

/// Rational upper bound on `ln q` for `q > 0`.
pub fn ln_hi(q: &BigRational) -> BigRational {
    ln_rational(q, 96).hi.to_rational()
}

/// Rational lower bound on `ln q` for `q > 0`.
pub fn ln_lo(q: &BigRational) -> BigRational {
    ln_rational(q, 96).lo.to_rational()
}

/// Decimal logarithm estimate of a positive integer.
pub fn log10_int(n: &BigInt) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits < 1000 {
        return n.to_f64().unwrap_or(f64::MAX).log10();
    }
    let shift = bits - 60;
    let top: BigInt = n >> shift as usize;
    top.to_f64().unwrap().log10() + shift as f64 * std::f64::consts::LOG10_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::interval::ratio;

    #[test]
    fn geometric() {
        // (3/4)^n < 2 from n = 0
        assert_eq!(geometric_below(&ratio(3, 4), &BigRational::from_integer(2.into())), BigInt::zero());
        // (1/2)^n < 1 from n = 1
        assert_eq!(geometric_below(&ratio(1, 2), &BigRational::one()), BigInt::one());
        // (1/2)^n < 1/1000 from n = 10
        assert_eq!(geometric_below(&ratio(1, 2), &ratio(1, 1000)), BigInt::from(10));
        // large exponents go through logarithms
        let n = geometric_below(&ratio(999_999, 1_000_000), &ratio(1, 10));
        let f = (0.1f64).ln() / (0.999_999f64).ln();
        assert!((n.to_f64().unwrap() - f).abs() < 2.0, "{n} {f}");
    }

    #[test]
    fn cauchy() {
        // 2n - 10 > 0 from n = 6 (bound gives 7)
        let t = cauchy_threshold(&ratio(2, 1), &[ratio(10, 1)]);
        assert!(t >= BigInt::from(6));
        assert_eq!(cauchy_threshold(&ratio(1, 1), &[]), BigInt::one());
    }
}
