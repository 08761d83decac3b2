//! Dense univariate polynomials over the integers and the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{CBox, Dyadic, Interval, Round};

/// Integer polynomial, coefficients lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<String>", try_from = "Vec<String>")]
pub struct IntPoly {
    c: Vec<BigInt>,
}

impl From<IntPoly> for Vec<String> {
    fn from(p: IntPoly) -> Self {
        p.c.iter().map(|x| x.to_string()).collect()
    }
}

impl TryFrom<Vec<String>> for IntPoly {
    type Error = String;
    fn try_from(v: Vec<String>) -> std::result::Result<Self, String> {
        let c: std::result::Result<Vec<BigInt>, _> = v.iter().map(|s| s.parse::<BigInt>()).collect();
        c.map(IntPoly::new).map_err(|e| e.to_string())
    }
}

fn trim<T: Zero>(v: &mut Vec<T>) {
    while v.last().is_some_and(|x| x.is_zero()) {
        v.pop();
    }
}

impl IntPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        trim(&mut c);
        IntPoly { c }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        IntPoly::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { c: vec![] }
    }

    pub fn one() -> Self {
        IntPoly { c: vec![BigInt::one()] }
    }

    pub fn x() -> Self {
        IntPoly::from_i64(&[0, 1])
    }

    pub fn constant(k: BigInt) -> Self {
        IntPoly::new(vec![k])
    }

    /// `k x^n`
    pub fn monomial(k: BigInt, n: usize) -> Self {
        let mut c = vec![BigInt::zero(); n + 1];
        c[n] = k;
        IntPoly::new(c)
    }

    /// `x - r`
    pub fn linear_root(r: &BigInt) -> Self {
        IntPoly::new(vec![-r, BigInt::one()])
    }

    /// Primitive linear polynomial `den x - num` vanishing at a rational.
    pub fn from_rational_root(q: &BigRational) -> Self {
        IntPoly::new(vec![-q.numer().clone(), q.denom().clone()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.c.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn lc(&self) -> BigInt {
        self.c.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn add(&self, o: &IntPoly) -> IntPoly {
        let n = self.c.len().max(o.c.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &IntPoly) -> IntPoly {
        let n = self.c.len().max(o.c.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly { c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::zero();
        }
        let mut r = vec![BigInt::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                r[i + j] += a * b;
            }
        }
        IntPoly::new(r)
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(self.c.iter().map(|x| x * k).collect())
    }

    pub fn pow(&self, n: u32) -> IntPoly {
        let mut r = IntPoly::one();
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(self.c.iter().enumerate().skip(1).map(|(i, a)| a * BigInt::from(i)).collect())
    }

    /// Non-negative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        self.c.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    /// Divide out the content and make the leading coefficient positive.
    pub fn primitive(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        IntPoly { c: self.c.iter().map(|x| x / &g).collect() }
    }

    /// Max absolute coefficient.
    pub fn height(&self) -> BigInt {
        self.c.iter().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero)
    }

    pub fn norm2_sq(&self) -> BigInt {
        self.c.iter().map(|x| x * x).sum()
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + BigRational::from_integer(a.clone());
        }
        acc
    }

    pub fn eval_dyadic(&self, x: &Dyadic) -> Dyadic {
        let mut acc = Dyadic::zero();
        for a in self.c.iter().rev() {
            acc = acc.mul(x).add(&Dyadic::from_int(a));
        }
        acc
    }

    /// Sign of `p(x)` at a rational point, computed exactly.
    pub fn sign_at_rational(&self, x: &BigRational) -> i32 {
        // den^deg p(num/den) has the same sign, stays integral
        let (n, d) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut dpow = BigInt::one();
        for a in self.c.iter().rev() {
            acc = acc * n + a * &dpow;
            dpow *= d;
        }
        sign_of(&acc)
    }

    pub fn eval_interval(&self, x: &Interval, prec: u32) -> Interval {
        let mut acc = Interval::zero();
        for a in self.c.iter().rev() {
            acc = acc.mul(x, prec).add(&Interval::from_int(a), prec);
        }
        acc
    }

    pub fn eval_cbox(&self, z: &CBox, prec: u32) -> CBox {
        let mut acc = CBox::zero();
        for a in self.c.iter().rev() {
            acc = acc.mul(z, prec).add(&CBox::real(Interval::from_int(a)), prec);
        }
        acc
    }

    /// `p(-x)`
    pub fn negate_x(&self) -> IntPoly {
        IntPoly::new(
            self.c
                .iter()
                .enumerate()
                .map(|(i, a)| if i % 2 == 1 { -a } else { a.clone() })
                .collect(),
        )
    }

    /// `p(k x)`
    pub fn scale_x(&self, k: &BigInt) -> IntPoly {
        let mut pw = BigInt::one();
        let mut out = Vec::with_capacity(self.c.len());
        for a in &self.c {
            out.push(a * &pw);
            pw *= k;
        }
        IntPoly::new(out)
    }

    /// `x^deg p(1/x)`
    pub fn reverse(&self) -> IntPoly {
        let mut c = self.c.clone();
        c.reverse();
        IntPoly::new(c)
    }

    /// `p(x^k)`
    pub fn subs_pow(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut c = vec![BigInt::zero(); self.degree() * k + 1];
        for (i, a) in self.c.iter().enumerate() {
            c[i * k] = a.clone();
        }
        IntPoly::new(c)
    }

    /// `p(q(x))`
    pub fn compose(&self, q: &IntPoly) -> IntPoly {
        let mut acc = IntPoly::zero();
        for a in self.c.iter().rev() {
            acc = acc.mul(q).add(&IntPoly::constant(a.clone()));
        }
        acc
    }

    /// Pseudo-division: returns `(q, r)` with `lc(d)^(deg a - deg d + 1) a = q d + r`.
    pub fn pseudo_divrem(&self, d: &IntPoly) -> (IntPoly, IntPoly) {
        assert!(!d.is_zero(), "pseudo division by zero polynomial");
        if self.c.len() < d.c.len() {
            return (IntPoly::zero(), self.clone());
        }
        let lc = d.lc();
        let dn = d.degree();
        let mut r = self.c.clone();
        let steps = self.c.len() - d.c.len() + 1;
        let mut q = vec![BigInt::zero(); steps];
        for k in (0..steps).rev() {
            let coef = r[k + dn].clone();
            for x in q.iter_mut() {
                *x *= &lc;
            }
            q[k] = coef.clone();
            for x in r.iter_mut() {
                *x *= &lc;
            }
            if !coef.is_zero() {
                for (j, b) in d.c.iter().enumerate() {
                    r[k + j] -= &coef * b;
                }
            }
        }
        r.truncate(dn);
        (IntPoly::new(q), IntPoly::new(r))
    }

    /// Exact quotient over the integers, if `d` divides `self`.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        assert!(!d.is_zero());
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.c.len() < d.c.len() {
            return None;
        }
        let lc = d.lc();
        let dn = d.degree();
        let mut r = self.c.clone();
        let mut q = vec![BigInt::zero(); self.c.len() - d.c.len() + 1];
        for k in (0..q.len()).rev() {
            let (qk, rem) = r[k + dn].div_rem(&lc);
            if !rem.is_zero() {
                return None;
            }
            if !qk.is_zero() {
                for (j, b) in d.c.iter().enumerate() {
                    r[k + j] -= &qk * b;
                }
            }
            q[k] = qk;
        }
        r.iter().all(|x| x.is_zero()).then(|| IntPoly::new(q))
    }

    /// Primitive gcd with positive leading coefficient (primitive PRS).
    pub fn gcd(&self, o: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return o.primitive();
        }
        if o.is_zero() {
            return self.primitive();
        }
        let (mut a, mut b) =
            if self.degree() >= o.degree() { (self.primitive(), o.primitive()) } else { (o.primitive(), self.primitive()) };
        while !b.is_zero() {
            let (_, r) = a.pseudo_divrem(&b);
            a = b;
            b = r.primitive();
        }
        a.primitive()
    }

    /// Squarefree part, primitive.
    pub fn squarefree(&self) -> IntPoly {
        if self.degree() < 1 {
            return self.primitive();
        }
        let g = self.gcd(&self.derivative());
        self.primitive().div_exact(&g).expect("gcd divides").primitive()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == 0
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly::new(self.c.iter().map(|a| BigRational::from_integer(a.clone())).collect())
    }

    /// Monic rescaling `lc^(d-1) p(x / lc)`, an integer monic polynomial
    /// whose roots are `lc` times those of `p`.
    pub fn monic_scaled(&self) -> IntPoly {
        let d = self.degree();
        let l = self.lc();
        let mut c = Vec::with_capacity(d + 1);
        for (i, a) in self.c.iter().enumerate() {
            if i == d {
                c.push(BigInt::one());
            } else {
                c.push(a * num_traits::pow(l.clone(), d - 1 - i));
            }
        }
        IntPoly::new(c)
    }
}

pub fn sign_of(x: &BigInt) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let mag = a.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coef = !mag.is_one() || i == 0;
            if show_coef {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Factors with multiplicities such that the product of `f^m` equals `p` up to content.
pub fn squarefree_decompose(p: &IntPoly) -> Result<Vec<(IntPoly, usize)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let p = p.primitive();
    if p.degree() == 0 {
        return Ok(vec![]);
    }
    // Yun's algorithm over Q with monic normalization
    let f = p.to_qpoly().monic();
    let df = f.derivative();
    let a = f.gcd(&df);
    let mut b = f.div_exact_q(&a);
    let c = df.div_exact_q(&a);
    let mut d = c.sub(&b.derivative());
    let mut out = Vec::new();
    let mut i = 1;
    while b.degree() > 0 {
        let ai = b.gcd(&d);
        b = b.div_exact_q(&ai);
        let c = d.div_exact_q(&ai);
        d = c.sub(&b.derivative());
        if ai.degree() > 0 {
            out.push((ai.to_int_primitive(), i));
        }
        i += 1;
    }
    Ok(out)
}

/// Lower bound on the distance between distinct roots of `p`:
/// `sqrt(6) / (d^((d+1)/2) H^(d-1))`, rounded down to a rational.
pub fn mignotte_gap(p: &IntPoly) -> Result<BigRational> {
    let d = p.degree();
    if p.is_zero() || d < 2 {
        return Err(Error::DegreeTooSmall { found: d, required: 2 });
    }
    let h = p.height();
    // square of the bound: 6 / (d^(d+1) H^(2d-2))
    let den = num_traits::pow(BigInt::from(d), d + 1) * num_traits::pow(h, 2 * d - 2);
    let sq = Dyadic::from_ratio(&BigInt::from(6), &den, 96, Round::Down);
    let root = crate::numeric::interval::sqrt_dyadic(&sq, 64, Round::Down);
    Ok(root.to_rational())
}

/// Rational polynomial, coefficients lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QPoly {
    c: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        trim(&mut c);
        QPoly { c }
    }

    pub fn zero() -> Self {
        QPoly { c: vec![] }
    }

    pub fn one() -> Self {
        QPoly { c: vec![BigRational::one()] }
    }

    pub fn constant(q: BigRational) -> Self {
        QPoly::new(vec![q])
    }

    pub fn x() -> Self {
        QPoly::new(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.c.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lc(&self) -> BigRational {
        self.c.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.c.len().max(o.c.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        let n = self.c.len().max(o.c.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> QPoly {
        QPoly { c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn scale(&self, k: &BigRational) -> QPoly {
        QPoly::new(self.c.iter().map(|x| x * k).collect())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut r = vec![BigRational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                r[i + j] += a * b;
            }
        }
        QPoly::new(r)
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.c.iter().enumerate().skip(1).map(|(i, a)| a * BigRational::from_integer(BigInt::from(i))).collect(),
        )
    }

    pub fn divrem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.c.len() < d.c.len() {
            return (QPoly::zero(), self.clone());
        }
        let lc = d.lc();
        let dn = d.degree();
        let mut r = self.c.clone();
        let mut q = vec![BigRational::zero(); self.c.len() - d.c.len() + 1];
        for k in (0..q.len()).rev() {
            let coef = &r[k + dn] / &lc;
            if !coef.is_zero() {
                for (j, b) in d.c.iter().enumerate() {
                    r[k + j] -= &coef * b;
                }
            }
            q[k] = coef;
        }
        r.truncate(dn);
        (QPoly::new(q), QPoly::new(r))
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        self.divrem(d).1
    }

    pub fn div_exact_q(&self, d: &QPoly) -> QPoly {
        let (q, r) = self.divrem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let l = self.lc();
        self.scale(&(BigRational::one() / l))
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.to_int_primitive().to_qpoly();
        }
        a.monic()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    pub fn eval_cbox(&self, z: &CBox, prec: u32) -> CBox {
        let mut acc = CBox::zero();
        for a in self.c.iter().rev() {
            acc = acc.mul(z, prec).add(&CBox::real(Interval::from_rational(a, prec + 4)), prec);
        }
        acc
    }

    /// Integer polynomial with the same roots: clear denominators, make primitive.
    pub fn to_int_primitive(&self) -> IntPoly {
        let l = self.c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        IntPoly::new(self.c.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect()).primitive()
    }

    /// `(self * other) mod m`
    pub fn mulmod(&self, o: &QPoly, m: &QPoly) -> QPoly {
        self.mul(o).rem(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn basic_ring_ops() {
        assert_eq!(p(&[-1, 1]).mul(&p(&[1, 1])), p(&[-1, 0, 1]));
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[1, -2, 1])), p(&[-1, 1]));
        assert_eq!(p(&[1, 2, 3]).derivative(), p(&[2, 6]));
        assert_eq!(p(&[4, 6, 8]).content(), BigInt::from(2));
        assert_eq!(p(&[-2, 0, 1]).to_string(), "x^2 - 2");
        assert_eq!(p(&[-1, 0, 1]).div_exact(&p(&[1, 1])), Some(p(&[-1, 1])));
        assert_eq!(p(&[-1, 0, 1]).div_exact(&p(&[2, 1])), None);
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_decompose(&p(&[1, -2, 1])).unwrap(), vec![(p(&[-1, 1]), 2)]);
        assert_eq!(squarefree_decompose(&p(&[0, -1, 0, 1])).unwrap(), vec![(p(&[0, -1, 0, 1]), 1)]);
        let a = p(&[-1, 1]).pow(2).mul(&p(&[1, 0, 1]).pow(3));
        let d = squarefree_decompose(&a).unwrap();
        assert_eq!(d, vec![(p(&[-1, 1]), 2), (p(&[1, 0, 1]), 3)]);
        assert_eq!(squarefree_decompose(&IntPoly::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn mignotte_values() {
        let g = mignotte_gap(&p(&[-2, 0, 1])).unwrap();
        // exact: g^2 <= 6 / (2^3 * 2^2)
        assert!(&g * &g <= BigRational::new(BigInt::from(6), BigInt::from(32)));
        let gf = crate::numeric::Dyadic::from_rational(&g, 64, Round::Down).to_f64();
        assert!((gf - 0.4330127018922193).abs() < 1e-12);
        assert!(mignotte_gap(&p(&[1, 1])).is_err());
    }

    #[test]
    fn exact_sign_at_rational() {
        let q = BigRational::new(BigInt::from(3), BigInt::from(2));
        assert_eq!(p(&[-2, 0, 1]).sign_at_rational(&q), 1);
        let q = BigRational::new(BigInt::from(-7), BigInt::from(5));
        assert_eq!(p(&[-2, 0, 1]).sign_at_rational(&q), -1);
        assert_eq!(p(&[-1, 1]).sign_at_rational(&BigRational::one()), 0);
    }
}
