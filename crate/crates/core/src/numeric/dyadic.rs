//! Dyadic rationals `m * 2^e` with exact ring operations and directed rounding.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction for operations that cannot be exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

/// An exact dyadic rational `man * 2^exp`, kept with an odd mantissa (or zero).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

fn div_round(num: &BigInt, den: &BigInt, dir: Round) -> BigInt {
    match dir {
        Round::Down => num.div_floor(den),
        Round::Up => -((-num).div_floor(den)),
    }
}

impl Dyadic {
    pub fn new(man: BigInt, exp: i64) -> Self {
        if man.is_zero() {
            return Dyadic::zero();
        }
        let tz = man.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            Dyadic { man: man >> tz, exp: exp + tz as i64 }
        } else {
            Dyadic { man, exp }
        }
    }

    pub fn zero() -> Self {
        Dyadic { man: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { man: BigInt::one(), exp: 0 }
    }

    pub fn from_int(n: &BigInt) -> Self {
        Dyadic::new(n.clone(), 0)
    }

    pub fn from_i64(n: i64) -> Self {
        Dyadic::new(BigInt::from(n), 0)
    }

    /// Exact conversion of a finite `f64`.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite f64");
        if x == 0.0 {
            return Dyadic::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let exp_bits = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if exp_bits == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp_bits - 1075)
        };
        Dyadic::new(BigInt::from(m) * sign, e)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.man.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic { man: self.man.abs(), exp: self.exp }
    }

    /// Position of the leading bit: `|self| < 2^magnitude()`. Zero maps to `i64::MIN`.
    pub fn magnitude(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.man.bits() as i64 + self.exp
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { man: self.man.clone(), exp: self.exp + k }
    }

    pub fn add(&self, o: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(o.exp);
        let a = &self.man << (self.exp - e) as u64;
        let b = &o.man << (o.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, o: &Dyadic) -> Dyadic {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { man: -&self.man, exp: self.exp }
    }

    pub fn mul(&self, o: &Dyadic) -> Dyadic {
        if self.is_zero() || o.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { man: &self.man * &o.man, exp: self.exp + o.exp }
    }

    pub fn mul_int(&self, k: &BigInt) -> Dyadic {
        Dyadic::new(&self.man * k, self.exp)
    }

    /// Round to at most `prec` significant bits in direction `dir`.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let bits = self.man.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        let m = div_round(&self.man, &pow2(shift), dir);
        Dyadic::new(m, self.exp + shift as i64)
    }

    /// Round to an absolute grid `2^-frac_bits`.
    pub fn round_abs(&self, frac_bits: i64, dir: Round) -> Dyadic {
        if self.exp >= -frac_bits {
            return self.clone();
        }
        let shift = (-frac_bits - self.exp) as u64;
        let m = div_round(&self.man, &pow2(shift), dir);
        Dyadic::new(m, -frac_bits)
    }

    /// Quotient `num / den` of integers rounded to `prec` significant bits.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32, dir: Round) -> Dyadic {
        assert!(!den.is_zero(), "division by zero");
        if num.is_zero() {
            return Dyadic::zero();
        }
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num.clone(), den.clone()) };
        let s = prec as i64 + 2 - (num.bits() as i64 - den.bits() as i64);
        let m = if s >= 0 {
            div_round(&(&num << s as u64), &den, dir)
        } else {
            div_round(&num, &(&den << (-s) as u64), dir)
        };
        Dyadic::new(m, -s).round(prec, dir)
    }

    pub fn from_rational(q: &BigRational, prec: u32, dir: Round) -> Dyadic {
        Dyadic::from_ratio(q.numer(), q.denom(), prec, dir)
    }

    /// Exact conversion when the denominator is a power of two.
    pub fn from_rational_exact(q: &BigRational) -> Option<Dyadic> {
        let d = q.denom();
        let tz = d.trailing_zeros().unwrap_or(0);
        if (d >> tz).is_one() {
            Some(Dyadic::new(q.numer().clone(), -(tz as i64)))
        } else {
            None
        }
    }

    pub fn div(&self, o: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        let q = Dyadic::from_ratio(&self.man, &o.man, prec, dir);
        q.mul_pow2(self.exp - o.exp)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.man << self.exp as u64)
        } else {
            BigRational::new(self.man.clone(), pow2((-self.exp) as u64))
        }
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << self.exp as u64
        } else {
            self.man.div_floor(&pow2((-self.exp) as u64))
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(self.neg().floor())
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits() as i64;
        let (m, e) = if bits > 60 {
            (&self.man >> (bits - 60) as u64, self.exp + bits - 60)
        } else {
            (self.man.clone(), self.exp)
        };
        let mf = m.to_f64().unwrap_or(0.0);
        if e > 2000 {
            return mf.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        mf * 2f64.powi(e as i32)
    }

    pub fn min_ref<'a>(&'a self, o: &'a Dyadic) -> &'a Dyadic {
        if self <= o {
            self
        } else {
            o
        }
    }

    pub fn max_ref<'a>(&'a self, o: &'a Dyadic) -> &'a Dyadic {
        if self >= o {
            self
        } else {
            o
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let (ma, mb) = (self.magnitude(), other.magnitude());
        if ma != mb {
            let o = ma.cmp(&mb);
            return if sa > 0 { o } else { o.reverse() };
        }
        self.sub(other).signum().cmp(&0)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_arith() {
        let a = Dyadic::from_f64(0.75);
        let b = Dyadic::from_f64(-2.5);
        assert_eq!(a.add(&b).to_f64(), -1.75);
        assert_eq!(a.mul(&b).to_f64(), -1.875);
        assert!(b < a);
        assert_eq!(Dyadic::from_f64(3.0).floor(), BigInt::from(3));
        assert_eq!(Dyadic::from_f64(-0.5).floor(), BigInt::from(-1));
        assert_eq!(Dyadic::from_f64(-0.5).ceil(), BigInt::from(0));
    }

    #[test]
    fn directed_division_brackets_third() {
        let one = BigInt::one();
        let three = BigInt::from(3);
        let lo = Dyadic::from_ratio(&one, &three, 64, Round::Down);
        let hi = Dyadic::from_ratio(&one, &three, 64, Round::Up);
        let third = BigRational::new(one, three);
        assert!(lo.to_rational() < third && third < hi.to_rational());
        let lo = Dyadic::from_ratio(&BigInt::from(-1), &BigInt::from(3), 64, Round::Down);
        assert!(lo.to_rational() < -BigRational::new(BigInt::one(), BigInt::from(3)));
    }

    #[test]
    fn rounding_is_directed() {
        let x = Dyadic::new(BigInt::from(0b1011_0111), 0);
        assert!(x.round(3, Round::Down) <= x);
        assert!(x.round(3, Round::Up) >= x);
        assert_eq!(x.round(3, Round::Down).to_f64(), 160.0);
        assert_eq!(x.round(3, Round::Up).to_f64(), 192.0);
    }
}
