//! Closed real intervals with dyadic endpoints and outward rounding.
//!
//! Every operation returns an enclosure of the exact result. Transcendental
//! functions use alternating or geometric series with explicit tail bounds.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::dyadic::{Dyadic, Round};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        Interval { lo, hi }
    }

    pub fn point(x: Dyadic) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        Interval::point(Dyadic::zero())
    }

    pub fn one() -> Self {
        Interval::point(Dyadic::one())
    }

    pub fn from_int(n: &BigInt) -> Self {
        Interval::point(Dyadic::from_int(n))
    }

    pub fn from_i64(n: i64) -> Self {
        Interval::point(Dyadic::from_i64(n))
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        if let Some(d) = Dyadic::from_rational_exact(q) {
            return Interval::point(d);
        }
        Interval {
            lo: Dyadic::from_rational(q, prec, Round::Down),
            hi: Dyadic::from_rational(q, prec, Round::Up),
        }
    }

    /// Symmetric enclosure `[c - r, c + r]`.
    pub fn around(c: &Dyadic, r: &Dyadic) -> Self {
        Interval { lo: c.sub(r), hi: c.add(r) }
    }

    pub fn hull(&self, o: &Interval) -> Interval {
        Interval { lo: self.lo.min_ref(&o.lo).clone(), hi: self.hi.max_ref(&o.hi).clone() }
    }

    pub fn intersect(&self, o: &Interval) -> Option<Interval> {
        let lo = self.lo.max_ref(&o.lo).clone();
        let hi = self.hi.min_ref(&o.hi).clone();
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn overlaps(&self, o: &Interval) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, o: &Interval) -> bool {
        self.lo <= o.lo && o.hi <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn is_positive(&self) -> bool {
        self.lo.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.hi.signum() < 0
    }

    /// `Some(sign)` when the sign is certain on the whole interval.
    pub fn sign(&self) -> Option<i32> {
        if self.is_positive() {
            Some(1)
        } else if self.is_negative() {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn mid(&self) -> Dyadic {
        self.lo.add(&self.hi).mul_pow2(-1)
    }

    pub fn mag(&self) -> Dyadic {
        self.lo.abs().max_ref(&self.hi.abs()).clone()
    }

    /// Smallest absolute value in the interval.
    pub fn mig(&self) -> Dyadic {
        if self.contains_zero() {
            Dyadic::zero()
        } else {
            self.lo.abs().min_ref(&self.hi.abs()).clone()
        }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn abs(&self) -> Interval {
        if self.lo.signum() >= 0 {
            self.clone()
        } else if self.hi.signum() <= 0 {
            self.neg()
        } else {
            Interval { lo: Dyadic::zero(), hi: self.mag() }
        }
    }

    fn rounded(lo: Dyadic, hi: Dyadic, prec: u32) -> Interval {
        Interval { lo: lo.round(prec, Round::Down), hi: hi.round(prec, Round::Up) }
    }

    pub fn add(&self, o: &Interval, prec: u32) -> Interval {
        Interval::rounded(self.lo.add(&o.lo), self.hi.add(&o.hi), prec)
    }

    pub fn sub(&self, o: &Interval, prec: u32) -> Interval {
        Interval::rounded(self.lo.sub(&o.hi), self.hi.sub(&o.lo), prec)
    }

    pub fn mul(&self, o: &Interval, prec: u32) -> Interval {
        let c = [self.lo.mul(&o.lo), self.lo.mul(&o.hi), self.hi.mul(&o.lo), self.hi.mul(&o.hi)];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval::rounded(lo, hi, prec)
    }

    pub fn sqr(&self, prec: u32) -> Interval {
        let a = self.lo.mul(&self.lo);
        let b = self.hi.mul(&self.hi);
        if self.contains_zero() {
            Interval::rounded(Dyadic::zero(), a.max_ref(&b).clone(), prec)
        } else {
            Interval::rounded(a.min_ref(&b).clone(), a.max_ref(&b).clone(), prec)
        }
    }

    pub fn scale_pow2(&self, k: i64) -> Interval {
        Interval { lo: self.lo.mul_pow2(k), hi: self.hi.mul_pow2(k) }
    }

    pub fn mul_int(&self, k: &BigInt, prec: u32) -> Interval {
        let a = self.lo.mul_int(k);
        let b = self.hi.mul_int(k);
        if k.is_negative() {
            Interval::rounded(b, a, prec)
        } else {
            Interval::rounded(a, b, prec)
        }
    }

    /// `None` if the divisor contains zero.
    pub fn recip(&self, prec: u32) -> Option<Interval> {
        if self.contains_zero() {
            return None;
        }
        let one = Dyadic::one();
        Some(Interval { lo: one.div(&self.hi, prec, Round::Down), hi: one.div(&self.lo, prec, Round::Up) })
    }

    pub fn div(&self, o: &Interval, prec: u32) -> Option<Interval> {
        if o.contains_zero() {
            return None;
        }
        let c = [
            self.lo.div(&o.lo, prec, Round::Down),
            self.lo.div(&o.hi, prec, Round::Down),
            self.hi.div(&o.lo, prec, Round::Down),
            self.hi.div(&o.hi, prec, Round::Down),
        ];
        let d = [
            self.lo.div(&o.lo, prec, Round::Up),
            self.lo.div(&o.hi, prec, Round::Up),
            self.hi.div(&o.lo, prec, Round::Up),
            self.hi.div(&o.hi, prec, Round::Up),
        ];
        Some(Interval { lo: c.iter().min().unwrap().clone(), hi: d.iter().max().unwrap().clone() })
    }

    pub fn pow(&self, n: u64, prec: u32) -> Interval {
        if n == 0 {
            return Interval::one();
        }
        if n % 2 == 0 {
            let h = self.pow(n / 2, prec);
            return h.sqr(prec);
        }
        self.pow(n - 1, prec).mul(self, prec)
    }

    pub fn max_with(&self, o: &Interval) -> Interval {
        Interval { lo: self.lo.max_ref(&o.lo).clone(), hi: self.hi.max_ref(&o.hi).clone() }
    }

    pub fn min_with(&self, o: &Interval) -> Interval {
        Interval { lo: self.lo.min_ref(&o.lo).clone(), hi: self.hi.min_ref(&o.hi).clone() }
    }

    pub fn sqrt(&self, prec: u32) -> Interval {
        assert!(self.hi.signum() >= 0, "sqrt of negative interval");
        let lo = if self.lo.signum() <= 0 { Dyadic::zero() } else { sqrt_dyadic(&self.lo, prec, Round::Down) };
        Interval { lo, hi: sqrt_dyadic(&self.hi, prec, Round::Up) }
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    pub fn lo_rational(&self) -> BigRational {
        self.lo.to_rational()
    }

    pub fn hi_rational(&self) -> BigRational {
        self.hi.to_rational()
    }
}

/// Directed square root of a non-negative dyadic to `prec` bits.
pub fn sqrt_dyadic(x: &Dyadic, prec: u32, dir: Round) -> Dyadic {
    if x.is_zero() {
        return Dyadic::zero();
    }
    assert!(x.signum() > 0);
    // x = m 2^e with e made even and m carrying about 2*prec bits
    let m = x.mantissa().clone();
    let e = x.exponent();
    let want = 2 * prec as i64 + 4;
    let mut shift = want - m.bits() as i64;
    if (e - shift).rem_euclid(2) != 0 {
        shift += 1;
    }
    let scaled = if shift >= 0 { &m << shift as u64 } else { &m >> (-shift) as u64 };
    let exact_scaled = if shift >= 0 { true } else { (&scaled << (-shift) as u64) == m };
    let mut r = scaled.sqrt();
    let exact = exact_scaled && &r * &r == scaled;
    match dir {
        Round::Down => {}
        Round::Up => {
            if !exact {
                r += 1;
            }
        }
    }
    Dyadic::new(r, (e - shift) / 2)
}

fn guard(prec: u32) -> u32 {
    prec + 16
}

/// Enclosure of `atan(x)` for a point with `|x| <= 1/2` by the alternating series.
fn atan_series(x: &Dyadic, prec: u32) -> Interval {
    let p = guard(prec);
    let x2 = Interval::point(x.mul(x));
    let mut pow = Interval::point(x.clone());
    let mut sum = Interval::zero();
    let target = -(p as i64) - 2;
    let mut k: i64 = 0;
    loop {
        let term = pow.div(&Interval::from_i64(2 * k + 1), p).unwrap();
        if term.mag().magnitude() < target && k > 0 {
            let tail = term.mag();
            return Interval::rounded(sum.lo.sub(&tail), sum.hi.add(&tail), prec);
        }
        sum = if k % 2 == 0 { sum.add(&term, p) } else { sum.sub(&term, p) };
        pow = pow.mul(&x2, p);
        k += 1;
    }
}

fn atan_point(x: &Dyadic, prec: u32) -> Interval {
    if x.signum() < 0 {
        return atan_point(&x.neg(), prec).neg();
    }
    let half = Dyadic::new(BigInt::one(), -1);
    let p = guard(prec);
    if *x <= half {
        return atan_series(x, p);
    }
    if *x <= Dyadic::one() {
        // atan x = pi/4 - atan((1-x)/(1+x))
        let one = Interval::one();
        let xi = Interval::point(x.clone());
        let y = one.sub(&xi, p).div(&one.add(&xi, p), p).unwrap();
        return pi(p).scale_pow2(-2).sub(&atan_interval(&y, p), prec);
    }
    // atan x = pi/2 - atan(1/x)
    let y = Interval::point(x.clone()).recip(p).unwrap();
    pi(p).scale_pow2(-1).sub(&atan_interval(&y, p), prec)
}

pub fn atan_interval(x: &Interval, prec: u32) -> Interval {
    let lo = atan_point(&x.lo, prec);
    if x.lo == x.hi {
        return lo;
    }
    let hi = atan_point(&x.hi, prec);
    Interval { lo: lo.lo, hi: hi.hi }
}

static PI_CACHE: Mutex<Option<(u32, Interval)>> = Mutex::new(None);

/// Enclosure of pi (Machin's formula), memoized at the highest precision requested so far.
pub fn pi(prec: u32) -> Interval {
    {
        let cache = PI_CACHE.lock().unwrap();
        if let Some((p, v)) = cache.as_ref() {
            if *p >= prec {
                return Interval::rounded(v.lo.clone(), v.hi.clone(), prec + 4);
            }
        }
    }
    let p = guard(prec.max(64));
    let a = atan_series(&Dyadic::from_ratio(&BigInt::one(), &BigInt::from(5), p + 8, Round::Down), p);
    let a_hi = atan_series(&Dyadic::from_ratio(&BigInt::one(), &BigInt::from(5), p + 8, Round::Up), p);
    let b = atan_series(&Dyadic::from_ratio(&BigInt::one(), &BigInt::from(239), p + 8, Round::Down), p);
    let b_hi = atan_series(&Dyadic::from_ratio(&BigInt::one(), &BigInt::from(239), p + 8, Round::Up), p);
    let a = a.hull(&a_hi);
    let b = b.hull(&b_hi);
    let v = a.scale_pow2(4).sub(&b.scale_pow2(2), p);
    let mut cache = PI_CACHE.lock().unwrap();
    *cache = Some((p, v.clone()));
    Interval::rounded(v.lo, v.hi, prec + 4)
}

/// Enclosures of `(cos x, sin x)` for a point with `|x| <= 4`.
fn cos_sin_point(x: &Dyadic, prec: u32) -> (Interval, Interval) {
    let p = guard(prec);
    let xi = Interval::point(x.clone());
    let x2 = xi.sqr(p);
    let target = -(p as i64) - 2;
    let series = |start: Interval, first_index: i64| {
        let mut term = start;
        let mut sum = Interval::zero();
        let mut k = 0i64;
        loop {
            let m = term.mag();
            if k > 3 && m.magnitude() < target {
                return Interval::rounded(sum.lo.sub(&m), sum.hi.add(&m), prec);
            }
            sum = if k % 2 == 0 { sum.add(&term, p) } else { sum.sub(&term, p) };
            let n = first_index + 2 * k;
            let den = Interval::from_i64((n + 1) * (n + 2));
            term = term.mul(&x2, p).div(&den, p).unwrap();
            k += 1;
        }
    };
    (series(Interval::one(), 0), series(xi.clone(), 1))
}

/// Reduce `x` by the nearest multiple of `2 pi`; returns the reduced interval.
fn reduce_2pi(x: &Interval, prec: u32) -> Interval {
    let p = guard(prec) + (x.mag().magnitude().max(0) as u32);
    let two_pi = pi(p).scale_pow2(1);
    let k = x.mid().div(&two_pi.mid(), 64, Round::Down);
    let k = k.add(&Dyadic::new(BigInt::one(), -1)).floor();
    if k.is_zero() {
        return x.clone();
    }
    x.sub(&two_pi.mul_int(&k, p), p)
}

fn contains_multiple_of_pi(x: &Interval, parity: i64, prec: u32) -> bool {
    let pi_i = pi(prec);
    // candidate j with j pi inside x
    let lo = x.lo.div(&pi_i.hi, 64, Round::Down).floor() - 1;
    let hi = x.hi.div(&pi_i.lo, 64, Round::Up).ceil() + 1;
    let mut j = lo;
    while j <= hi {
        if (&j % 2 + 2) % 2 == BigInt::from(parity) {
            let jp = pi_i.mul_int(&j, prec);
            if jp.overlaps(x) {
                return true;
            }
        }
        j += 1;
    }
    false
}

pub fn cos_interval(x: &Interval, prec: u32) -> Interval {
    let r = reduce_2pi(x, prec);
    let four = Dyadic::from_i64(4);
    if r.width() >= Dyadic::from_i64(6) || r.lo < four.neg() || r.hi > four {
        return Interval::new(Dyadic::from_i64(-1), Dyadic::one());
    }
    let (c_lo, _) = cos_sin_point(&r.lo, prec);
    let mut out = if r.lo == r.hi { c_lo } else { c_lo.hull(&cos_sin_point(&r.hi, prec).0) };
    if contains_multiple_of_pi(&r, 0, prec + 8) {
        out.hi = Dyadic::one();
    }
    if contains_multiple_of_pi(&r, 1, prec + 8) {
        out.lo = Dyadic::from_i64(-1);
    }
    clamp_unit(out)
}

pub fn sin_interval(x: &Interval, prec: u32) -> Interval {
    let half_pi = pi(guard(prec) + x.mag().magnitude().max(0) as u32).scale_pow2(-1);
    cos_interval(&x.sub(&half_pi, guard(prec) + x.mag().magnitude().max(0) as u32), prec)
}

fn clamp_unit(mut i: Interval) -> Interval {
    let one = Dyadic::one();
    let m1 = Dyadic::from_i64(-1);
    if i.hi > one {
        i.hi = one;
    }
    if i.lo < m1 {
        i.lo = m1;
    }
    i
}

/// `2 atanh(z)` for a point `0 <= z <= 1/3`.
fn two_atanh(z: &Dyadic, prec: u32) -> Interval {
    let p = guard(prec);
    let zi = Interval::point(z.clone());
    let z2 = zi.sqr(p);
    let mut pow = zi;
    let mut sum = Interval::zero();
    let target = -(p as i64) - 3;
    let mut k = 0i64;
    loop {
        let term = pow.div(&Interval::from_i64(2 * k + 1), p).unwrap();
        if k > 0 && term.mag().magnitude() < target {
            // geometric tail bound: term / (1 - z^2) <= 9/8 term, use 2 term
            let tail = term.mag().mul_pow2(1);
            let s = sum.scale_pow2(1);
            return Interval::rounded(s.lo, s.hi.add(&tail.mul_pow2(1)), prec);
        }
        sum = sum.add(&term, p);
        pow = pow.mul(&z2, p);
        k += 1;
    }
}

pub fn ln2(prec: u32) -> Interval {
    two_atanh(&Dyadic::from_ratio(&BigInt::one(), &BigInt::from(3), guard(prec) + 4, Round::Down), prec).hull(
        &two_atanh(&Dyadic::from_ratio(&BigInt::one(), &BigInt::from(3), guard(prec) + 4, Round::Up), prec),
    )
}

fn ln_point(x: &Dyadic, prec: u32) -> Interval {
    assert!(x.signum() > 0, "ln of non-positive number");
    let p = guard(prec);
    // x = m 2^e with m in [1, 2)
    let e = x.magnitude() - 1;
    let m = x.mul_pow2(-e);
    let mi = Interval::point(m);
    let one = Interval::one();
    let z = mi.sub(&one, p).div(&mi.add(&one, p), p).unwrap();
    let lz = two_atanh(&z.lo, p).hull(&two_atanh(&z.hi, p));
    ln2(p).mul_int(&BigInt::from(e), p).add(&lz, prec)
}

pub fn ln_interval(x: &Interval, prec: u32) -> Interval {
    let lo = ln_point(&x.lo, prec);
    if x.lo == x.hi {
        return lo;
    }
    Interval { lo: lo.lo, hi: ln_point(&x.hi, prec).hi }
}

pub fn ln_rational(q: &BigRational, prec: u32) -> Interval {
    ln_interval(&Interval::from_rational(q, guard(prec) + 8), prec)
}

/// Enclosure of `exp(x)` for any interval, via range reduction by `ln 2`.
pub fn exp_interval(x: &Interval, prec: u32) -> Interval {
    let p = guard(prec) + 8;
    let point = |d: &Dyadic| -> Interval {
        let l2 = ln2(p + d.magnitude().max(0) as u32);
        let k = d.div(&l2.mid(), 64, Round::Down).floor();
        let r = Interval::point(d.clone()).sub(&l2.mul_int(&k, p), p);
        // series for |r| <= 1, all terms positive or alternating; bound tail by 2 |term|
        let mut term = Interval::one();
        let mut sum = Interval::zero();
        let mut n = 0i64;
        let target = -(p as i64) - 4;
        loop {
            if n > 2 && term.mag().magnitude() < target {
                let t = term.mag().mul_pow2(1);
                sum = Interval { lo: sum.lo.sub(&t), hi: sum.hi.add(&t) };
                break;
            }
            sum = sum.add(&term, p);
            n += 1;
            term = term.mul(&r, p).div(&Interval::from_i64(n), p).unwrap();
        }
        let k = k.to_string().parse::<i64>().unwrap_or(0);
        sum.scale_pow2(k)
    };
    let lo = point(&x.lo);
    if x.lo == x.hi {
        return Interval::rounded(lo.lo, lo.hi, prec);
    }
    let hi = point(&x.hi);
    Interval::rounded(lo.lo, hi.hi, prec)
}

/// Convenience: rational from an `(n, d)` pair.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_nonneg_rational(q: &BigRational) -> bool {
    !q.is_negative() || q.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(i: &Interval, v: f64, tol: f64) -> bool {
        (i.lo.to_f64() - v).abs() < tol && (i.hi.to_f64() - v).abs() < tol && i.lo <= i.hi
    }

    #[test]
    fn pi_and_atan() {
        let p = pi(200);
        assert!(close(&p, std::f64::consts::PI, 1e-15));
        assert!(p.width().magnitude() < -190);
        let a = atan_interval(&Interval::point(Dyadic::from_f64(0.75)), 128);
        assert!(close(&a, 0.75f64.atan(), 1e-15));
        let a = atan_interval(&Interval::point(Dyadic::from_f64(7.0)), 128);
        assert!(close(&a, 7f64.atan(), 1e-15));
    }

    #[test]
    fn trig_enclosures() {
        for &x in &[0.0, 0.5, 1.0, 3.0, -2.0, 10.0, 100.25] {
            let xi = Interval::point(Dyadic::from_f64(x));
            assert!(close(&cos_interval(&xi, 100), x.cos(), 1e-13), "cos {x}");
            assert!(close(&sin_interval(&xi, 100), x.sin(), 1e-13), "sin {x}");
        }
        let wide = Interval::new(Dyadic::from_f64(3.0), Dyadic::from_f64(3.3));
        assert_eq!(cos_interval(&wide, 64).lo, Dyadic::from_i64(-1));
    }

    #[test]
    fn logs_and_exp() {
        let l = ln_interval(&Interval::from_i64(100), 128);
        assert!(close(&l, 100f64.ln(), 1e-13));
        let l = ln_rational(&ratio(3, 7), 128);
        assert!(close(&l, (3.0f64 / 7.0).ln(), 1e-14));
        let e = exp_interval(&Interval::point(Dyadic::from_f64(-3.5)), 100);
        assert!(close(&e, (-3.5f64).exp(), 1e-15));
    }

    #[test]
    fn sqrt_directed() {
        let s = Interval::from_i64(2).sqrt(100);
        assert!(s.lo.mul(&s.lo) <= Dyadic::from_i64(2));
        assert!(s.hi.mul(&s.hi) >= Dyadic::from_i64(2));
        assert!(s.width().magnitude() < -95);
    }
}
