//! Exact complex algebraic numbers: a squarefree vanishing polynomial plus an
//! isolating square.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::{charpoly, mat_pow, Mat};
use super::poly::{mignotte_gap, IntPoly};
use super::resultant::{product_poly, quotient_poly, resultant, sum_poly};
use super::roots::{isolate_squarefree, rational_box, refine_squarefree, Rectangle};
use crate::error::{Error, Result};
use crate::numeric::{CBox, Dyadic, Interval, Round};

const PREC: u32 = 128;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraicNumber {
    vanishing_poly: IntPoly,
    #[serde(rename = "box")]
    rect: Rectangle,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    cached_refinements: Vec<Rectangle>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Conj,
    Re,
    Im,
    Abs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
    Derivative,
    Content,
    Gcd,
    ResultantX,
}

/// Exact polynomial operations. `ResultantX` eliminates `y` from `p(y)` and
/// `q(x - y)`, giving a polynomial that vanishes at all sums of roots.
pub fn poly_arith(kind: PolyOp, p: &IntPoly, q: Option<&IntPoly>) -> Result<IntPoly> {
    let need = || q.ok_or_else(|| Error::Precondition("second operand required".into()));
    Ok(match kind {
        PolyOp::Add => p.add(need()?),
        PolyOp::Sub => p.sub(need()?),
        PolyOp::Mul => p.mul(need()?),
        PolyOp::Derivative => p.derivative(),
        PolyOp::Content => IntPoly::constant(p.content()),
        PolyOp::Gcd => p.gcd(need()?),
        PolyOp::ResultantX => {
            let q = need()?;
            if p.is_zero() || q.is_zero() {
                return Err(Error::ZeroPolynomial);
            }
            sum_poly(p, q)
        }
    })
}

/// One algebraic number per distinct root of `p`, each box below a quarter of
/// the root separation bound.
pub fn isolate_roots(p: &IntPoly) -> Result<Vec<AlgebraicNumber>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.degree() < 1 {
        return Err(Error::DegreeTooSmall { found: 0, required: 1 });
    }
    let sf = p.squarefree();
    let rects = isolate_squarefree(&sf);
    let mut target: Option<Dyadic> = None;
    for q in [p, &sf] {
        if q.degree() >= 2 {
            let g = Dyadic::from_rational(&mignotte_gap(q)?, 64, Round::Down).mul_pow2(-3);
            target = Some(match target {
                Some(t) => t.min_ref(&g).clone(),
                None => g,
            });
        }
    }
    Ok(rects
        .into_iter()
        .map(|r| {
            let r = match &target {
                Some(t) => refine_squarefree(&sf, &r, t),
                None => r,
            };
            AlgebraicNumber::from_parts(sf.clone(), r)
        })
        .collect())
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl AlgebraicNumber {
    /// Trusted constructor: `poly` squarefree and `rect` isolating one of its roots.
    pub(crate) fn from_parts(poly: IntPoly, rect: Rectangle) -> Self {
        let poly = poly.primitive();
        let mut a = AlgebraicNumber { vanishing_poly: poly, rect, cached_refinements: vec![] };
        a.normalize();
        a
    }

    /// Validate a deserialized or user-built representation.
    pub fn checked(poly: IntPoly, rect: Rectangle) -> Result<Self> {
        if poly.degree() < 1 {
            return Err(Error::DegreeTooSmall { found: poly.degree(), required: 1 });
        }
        let sf = poly.squarefree();
        let roots = isolate_squarefree(&sf);
        let hits: Vec<&Rectangle> = roots.iter().filter(|r| r.intersects(&rect)).collect();
        if hits.len() != 1 || !rect.contains(&refine_squarefree(&sf, hits[0], &rect.half_width.mul_pow2(-4))) {
            return Err(Error::Precondition("box does not isolate a root".into()));
        }
        Ok(AlgebraicNumber::from_parts(sf, rect))
    }

    pub fn from_rational(q: &BigRational) -> Self {
        AlgebraicNumber { vanishing_poly: IntPoly::from_rational_root(q), rect: rational_box(q), cached_refinements: vec![] }
    }

    pub fn from_int(n: &BigInt) -> Self {
        AlgebraicNumber::from_rational(&BigRational::from_integer(n.clone()))
    }

    pub fn from_i64(n: i64) -> Self {
        AlgebraicNumber::from_int(&BigInt::from(n))
    }

    pub fn zero() -> Self {
        AlgebraicNumber::from_i64(0)
    }

    pub fn one() -> Self {
        AlgebraicNumber::from_i64(1)
    }

    /// Exact `re + im i` for rationals.
    pub fn gaussian(re: &BigRational, im: &BigRational) -> Self {
        if im.is_zero() {
            return AlgebraicNumber::from_rational(re);
        }
        // (x - re)^2 + im^2, cleared of denominators
        let q = crate::algebra::QPoly::new(vec![re * re + im * im, -(re * rat(2, 1)), BigRational::one()]);
        let p = q.to_int_primitive();
        let w = |x: &BigRational| Interval::from_rational(x, 96);
        let (r, i) = (w(re), w(im));
        let h = r.width().max_ref(&i.width()).clone().max_ref(&Dyadic::new(BigInt::one(), -90)).clone();
        let rect = Rectangle::new(r.mid(), i.mid(), h);
        AlgebraicNumber { vanishing_poly: p, rect, cached_refinements: vec![] }
    }

    pub fn i() -> Self {
        AlgebraicNumber::gaussian(&BigRational::zero(), &BigRational::one())
    }

    pub fn poly(&self) -> &IntPoly {
        &self.vanishing_poly
    }

    pub fn rect(&self) -> &Rectangle {
        &self.rect
    }

    pub fn cached_refinements(&self) -> &[Rectangle] {
        &self.cached_refinements
    }

    pub fn degree(&self) -> usize {
        self.vanishing_poly.degree()
    }

    pub fn is_real(&self) -> bool {
        self.rect.is_real()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        (self.degree() == 1).then(|| BigRational::new(-self.vanishing_poly.coeff(0), self.vanishing_poly.coeff(1)))
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|q| q.is_integer()).map(|q| q.to_integer())
    }

    /// `(re, im)` when the number is a Gaussian rational.
    pub fn as_gaussian(&self) -> Option<(BigRational, BigRational)> {
        if let Some(q) = self.as_rational() {
            return Some((q, BigRational::zero()));
        }
        if self.degree() != 2 || self.is_real() {
            return None;
        }
        let p = &self.vanishing_poly;
        let (a, b, c) = (p.coeff(2), p.coeff(1), p.coeff(0));
        // roots (-b ± sqrt(b^2 - 4ac)) / 2a with negative discriminant
        let disc = &b * &b - BigInt::from(4) * &a * &c;
        let m = -disc;
        let s = m.sqrt();
        if &s * &s != m {
            return None;
        }
        let two_a = BigInt::from(2) * &a;
        let re = BigRational::new(-b, two_a.clone());
        let im = BigRational::new(s, two_a);
        let im = if self.rect.center_im.signum() > 0 { im } else { -im };
        Some((re, im))
    }

    /// Enclosing box of the current representation.
    pub fn enclosure(&self) -> CBox {
        self.rect.to_cbox()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.rect.center_re.to_f64(), self.rect.center_im.to_f64())
    }

    fn normalize(&mut self) {
        if self.is_real() && self.vanishing_poly.degree() > 1 {
            if let Some(q) = self.guess_rational() {
                self.vanishing_poly = IntPoly::from_rational_root(&q);
                return;
            }
        }
        if !self.is_real() && self.vanishing_poly.degree() > 2 {
            if let Some(g) = self.guess_gaussian() {
                let b = AlgebraicNumber::gaussian(&g.0, &g.1);
                self.vanishing_poly = b.vanishing_poly;
            }
        }
    }

    fn guess_rational(&self) -> Option<BigRational> {
        let p = &self.vanishing_poly;
        if !p.coeff(0).is_zero() && p.degree() > 0 {
            // rational roots have denominators dividing lc; try lc-scaled rounding
            let lc = p.lc();
            if lc.bits() > 64 {
                return None;
            }
            let c = self.rect.center_re.mul_int(&lc);
            let lo = self.rect.center_re.sub(&self.rect.half_width).mul_int(&lc).ceil();
            let hi = self.rect.center_re.add(&self.rect.half_width).mul_int(&lc).floor();
            if &hi - &lo > BigInt::from(4) {
                let k = c.floor();
                return self.test_rational(BigRational::new(k.clone(), lc.clone()))
                    .or_else(|| self.test_rational(BigRational::new(k + 1, lc)));
            }
            let mut k = lo;
            while k <= hi {
                if let Some(q) = self.test_rational(BigRational::new(k.clone(), lc.clone())) {
                    return Some(q);
                }
                k += 1;
            }
            None
        } else {
            self.test_rational(BigRational::zero())
        }
    }

    fn test_rational(&self, q: BigRational) -> Option<BigRational> {
        let d = Dyadic::from_rational(&q, 128, Round::Down);
        let inside = Interval::around(&self.rect.center_re, &self.rect.half_width);
        let qi = Interval::from_rational(&q, 128);
        if !inside.overlaps(&qi) && !inside.contains(&d) {
            return None;
        }
        if self.vanishing_poly.sign_at_rational(&q) != 0 {
            return None;
        }
        let lo = self.rect.center_re.sub(&self.rect.half_width).to_rational();
        let hi = self.rect.center_re.add(&self.rect.half_width).to_rational();
        (lo <= q && q <= hi).then_some(q)
    }

    fn guess_gaussian(&self) -> Option<(BigRational, BigRational)> {
        let p = &self.vanishing_poly;
        let lc = p.lc();
        if lc.bits() > 64 || self.rect.half_width.magnitude() > -8 {
            return None;
        }
        // real and imaginary parts of Gaussian-rational roots have denominators dividing 2 lc
        let den = &lc * 2;
        let re = self.rect.center_re.mul_int(&den);
        let im = self.rect.center_im.mul_int(&den);
        let (rk, ik) = (nearest(&re), nearest(&im));
        let (r, i) = (BigRational::new(rk, den.clone()), BigRational::new(ik, den));
        if i.is_zero() {
            return None;
        }
        let hw = self.rect.half_width.to_rational();
        if (&r - self.rect.center_re.to_rational()).abs() > hw || (&i - self.rect.center_im.to_rational()).abs() > hw {
            return None;
        }
        let g = AlgebraicNumber::gaussian(&r, &i);
        // exact divisibility: the Gaussian quadratic divides p
        p.div_exact(&g.vanishing_poly).map(|_| (r, i))
    }

    fn push_rect(&mut self, r: Rectangle) {
        let old = std::mem::replace(&mut self.rect, r);
        self.cached_refinements.push(old);
        if self.cached_refinements.len() > 4 {
            self.cached_refinements.remove(0);
        }
    }

    /// Same number with box half-width at most `target` (nested in the current box).
    pub fn refine(&self, target: &BigRational) -> Result<AlgebraicNumber> {
        if !target.is_positive() {
            return Err(Error::Precondition("target half width must be positive".into()));
        }
        let t = Dyadic::from_rational(target, 64, Round::Down);
        let mut a = self.clone();
        a.refine_mut(&t);
        Ok(a)
    }

    pub(crate) fn refine_mut(&mut self, target: &Dyadic) {
        if self.rect.half_width <= *target {
            return;
        }
        if let Some(q) = self.as_rational() {
            let c = Interval::from_rational(&q, (64 - target.magnitude()).max(64) as u32 + 8);
            let h = c.width().mul_pow2(-1).max_ref(&target.mul_pow2(-2)).clone();
            let r = Rectangle::new(c.mid(), Dyadic::zero(), h);
            self.push_rect(r);
            return;
        }
        let r = refine_squarefree(&self.vanishing_poly, &self.rect, target);
        self.push_rect(r);
    }

    /// Refine until the half-width is below `2^-bits` relative to magnitude.
    pub(crate) fn refine_bits(&mut self, bits: i64) {
        let mag = self.rect.center_re.magnitude().max(self.rect.center_im.magnitude()).max(0);
        self.refine_mut(&Dyadic::new(BigInt::one(), mag - bits));
    }

    pub(crate) fn halve(&mut self) {
        let t = self.rect.half_width.mul_pow2(-2);
        self.refine_mut(&t);
    }

    /// Box of half-width below `2^-bits` (relative).
    pub fn approx(&self, bits: i64) -> CBox {
        let mut a = self.clone();
        a.refine_bits(bits);
        a.enclosure()
    }

    pub fn neg(&self) -> AlgebraicNumber {
        AlgebraicNumber {
            vanishing_poly: self.vanishing_poly.negate_x().primitive(),
            rect: self.rect.neg(),
            cached_refinements: vec![],
        }
    }

    pub fn conj(&self) -> AlgebraicNumber {
        AlgebraicNumber { vanishing_poly: self.vanishing_poly.clone(), rect: self.rect.conj(), cached_refinements: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        if let Some(q) = self.as_rational() {
            return q.is_zero();
        }
        // squarefree and non-linear: 0 is a root iff x | p; then the box decides
        self.vanishing_poly.coeff(0).is_zero() && self.enclosure().contains_zero()
    }

    /// Exact sign of a real number.
    pub fn sign(&self) -> Result<i32> {
        if !self.is_real() {
            return Err(Error::NotReal);
        }
        if let Some(q) = self.as_rational() {
            return Ok(if q.is_positive() { 1 } else if q.is_negative() { -1 } else { 0 });
        }
        if self.is_zero() {
            return Ok(0);
        }
        let mut a = self.clone();
        loop {
            if let Some(s) = a.enclosure().re.sign() {
                if s != 0 {
                    return Ok(s);
                }
            }
            a.halve();
        }
    }

    /// Is this number a root of the divisor `g` of its vanishing polynomial?
    fn is_root_of_factor(&self, g: &IntPoly) -> bool {
        if g.degree() == 0 {
            return false;
        }
        let h = match self.vanishing_poly.div_exact(g) {
            Some(h) => h,
            None => {
                // g need not divide exactly when contents differ; fall back to rational division
                let (q, r) = self.vanishing_poly.to_qpoly().divrem(&g.to_qpoly());
                debug_assert!(r.is_zero());
                q.to_int_primitive()
            }
        };
        if h.degree() == 0 {
            return true;
        }
        if let Some(q) = self.as_rational() {
            return g.sign_at_rational(&q) == 0;
        }
        let mut a = self.clone();
        loop {
            let b = a.enclosure();
            let gv = g.eval_cbox(&b, PREC);
            if !gv.contains_zero() {
                return false;
            }
            let hv = h.eval_cbox(&b, PREC);
            if !hv.contains_zero() {
                return true;
            }
            a.halve();
        }
    }

    /// Exact equality.
    pub fn equal(&self, o: &AlgebraicNumber) -> bool {
        if !self.rect.intersects(&o.rect) {
            return false;
        }
        if let (Some(a), Some(b)) = (self.as_rational(), o.as_rational()) {
            return a == b;
        }
        if self.is_real() != o.is_real() {
            return false;
        }
        let g = self.vanishing_poly.gcd(&o.vanishing_poly);
        if g.degree() == 0 {
            return false;
        }
        if !self.is_root_of_factor(&g) || !o.is_root_of_factor(&g) {
            return false;
        }
        // each box isolates its number among the roots of g
        let (mut a, mut b) = (self.clone(), o.clone());
        for _ in 0..4096 {
            if !a.rect.intersects(&b.rect) {
                return false;
            }
            if a.rect.contains(&b.rect) || b.rect.contains(&a.rect) {
                return true;
            }
            if a.rect.half_width >= b.rect.half_width {
                a.halve();
            } else {
                b.halve();
            }
        }
        panic!("equality test did not settle");
    }

    /// Exact comparison of two real numbers.
    pub fn compare_real(&self, o: &AlgebraicNumber) -> Result<Ordering> {
        if !self.is_real() || !o.is_real() {
            return Err(Error::NotReal);
        }
        if let (Some(a), Some(b)) = (self.as_rational(), o.as_rational()) {
            return Ok(a.cmp(&b));
        }
        let (mut a, mut b) = (self.clone(), o.clone());
        for round in 0.. {
            let (ia, ib) = (a.enclosure().re, b.enclosure().re);
            if ia.hi < ib.lo {
                return Ok(Ordering::Less);
            }
            if ib.hi < ia.lo {
                return Ok(Ordering::Greater);
            }
            if round == 3 && a.equal(&b) {
                return Ok(Ordering::Equal);
            }
            a.halve();
            b.halve();
        }
        unreachable!()
    }

    /// Compare `|self|` with `|o|` exactly.
    pub fn compare_modulus(&self, o: &AlgebraicNumber) -> Ordering {
        if !self.is_real() && self.vanishing_poly == o.vanishing_poly && self.rect.conj().intersects(&o.rect) && self.conj().equal(o) {
            return Ordering::Equal;
        }
        let (mut a, mut b) = (self.clone(), o.clone());
        for _ in 0..6 {
            let ma = a.enclosure().abs2(PREC);
            let mb = b.enclosure().abs2(PREC);
            if ma.hi < mb.lo {
                return Ordering::Less;
            }
            if mb.hi < ma.lo {
                return Ordering::Greater;
            }
            a.refine_bits(PREC as i64 / 2);
            b.refine_bits(PREC as i64 / 2);
        }
        let m2 = |x: &AlgebraicNumber| -> AlgebraicNumber {
            if x.is_real() {
                x.mul(x)
            } else {
                x.mul(&x.conj())
            }
        };
        m2(&a).compare_real(&m2(&b)).expect("moduli squared are real")
    }

    pub fn add(&self, o: &AlgebraicNumber) -> AlgebraicNumber {
        if let (Some(a), Some(b)) = (self.as_gaussian(), o.as_gaussian()) {
            return AlgebraicNumber::gaussian(&(a.0 + b.0), &(a.1 + b.1));
        }
        if let Some(q) = o.as_rational() {
            return self.add_rational(&q);
        }
        if let Some(q) = self.as_rational() {
            return o.add_rational(&q);
        }
        let r = sum_poly(&self.vanishing_poly, &o.vanishing_poly);
        identify(&r, &[self.clone(), o.clone()], |b, p| Some(b[0].add(&b[1], p)))
    }

    pub fn sub(&self, o: &AlgebraicNumber) -> AlgebraicNumber {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &AlgebraicNumber) -> AlgebraicNumber {
        if let (Some(a), Some(b)) = (self.as_gaussian(), o.as_gaussian()) {
            let re = &a.0 * &b.0 - &a.1 * &b.1;
            let im = &a.0 * &b.1 + &a.1 * &b.0;
            return AlgebraicNumber::gaussian(&re, &im);
        }
        if let Some(q) = o.as_rational() {
            return self.mul_rational(&q);
        }
        if let Some(q) = self.as_rational() {
            return o.mul_rational(&q);
        }
        let r = product_poly(&self.vanishing_poly, &o.vanishing_poly);
        identify(&r, &[self.clone(), o.clone()], |b, p| Some(b[0].mul(&b[1], p)))
    }

    pub fn div(&self, o: &AlgebraicNumber) -> Result<AlgebraicNumber> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let (Some(a), Some(b)) = (self.as_gaussian(), o.as_gaussian()) {
            let n = &b.0 * &b.0 + &b.1 * &b.1;
            let re = (&a.0 * &b.0 + &a.1 * &b.1) / &n;
            let im = (&a.1 * &b.0 - &a.0 * &b.1) / &n;
            return Ok(AlgebraicNumber::gaussian(&re, &im));
        }
        if let Some(q) = o.as_rational() {
            return Ok(self.mul_rational(&q.recip()));
        }
        let r = quotient_poly(&self.vanishing_poly, &o.vanishing_poly);
        Ok(identify(&r, &[self.clone(), o.clone()], |b, p| b[0].div(&b[1], p)))
    }

    pub fn inv(&self) -> Result<AlgebraicNumber> {
        AlgebraicNumber::one().div(self)
    }

    pub fn add_rational(&self, q: &BigRational) -> AlgebraicNumber {
        if q.is_zero() {
            return self.clone();
        }
        if let Some(a) = self.as_gaussian() {
            return AlgebraicNumber::gaussian(&(a.0 + q), &a.1);
        }
        // p(x - q) scaled to integers
        let shift = crate::algebra::QPoly::new(vec![-q.clone(), BigRational::one()]);
        let mut acc = crate::algebra::QPoly::zero();
        for c in self.vanishing_poly.coeffs().iter().rev() {
            acc = acc.mul(&shift).add(&crate::algebra::QPoly::constant(BigRational::from_integer(c.clone())));
        }
        let poly = acc.to_int_primitive();
        let q_box = CBox::real(Interval::from_rational(q, PREC));
        identify(&poly, &[self.clone()], move |b, p| Some(b[0].add(&q_box, p)))
    }

    pub fn mul_rational(&self, q: &BigRational) -> AlgebraicNumber {
        if q.is_zero() {
            return AlgebraicNumber::zero();
        }
        if let Some(a) = self.as_gaussian() {
            return AlgebraicNumber::gaussian(&(a.0 * q), &(a.1 * q));
        }
        // roots scaled by q = n/d: d^deg... p(d x / n)
        let (n, d) = (q.numer(), q.denom());
        let deg = self.vanishing_poly.degree();
        let c: Vec<BigInt> = self
            .vanishing_poly
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, a)| a * num_traits::pow(d.clone(), i) * num_traits::pow(n.clone(), deg - i))
            .collect();
        let poly = IntPoly::new(c).primitive();
        let q_box = CBox::real(Interval::from_rational(q, PREC));
        identify(&poly, &[self.clone()], move |b, p| Some(b[0].mul(&q_box, p)))
    }

    /// Real part.
    pub fn re(&self) -> AlgebraicNumber {
        if self.is_real() {
            return self.clone();
        }
        if let Some(g) = self.as_gaussian() {
            return AlgebraicNumber::from_rational(&g.0);
        }
        let s = sum_poly(&self.vanishing_poly, &self.vanishing_poly);
        // (a + conj a)/2 is a root of s(2x)
        let r = s.scale_x(&BigInt::from(2));
        identify(&r, &[self.clone()], |b, _| Some(CBox::real(b[0].re.clone())))
    }

    /// Imaginary part.
    pub fn im(&self) -> AlgebraicNumber {
        if self.is_real() {
            return AlgebraicNumber::zero();
        }
        if let Some(g) = self.as_gaussian() {
            return AlgebraicNumber::from_rational(&g.1);
        }
        // a - conj a = 2 i Im(a) is a root of q = Res(p(y), p(y - x))
        let q = sum_poly(&self.vanishing_poly, &self.vanishing_poly.negate_x());
        // q(2 i y) = A(y) + i B(y); Im(a) is a real root of A^2 + B^2
        let mut a = vec![BigInt::zero(); q.degree() + 1];
        let mut b = vec![BigInt::zero(); q.degree() + 1];
        let mut pw = BigInt::one();
        for (k, c) in q.coeffs().iter().enumerate() {
            let v = c * &pw;
            match k % 4 {
                0 => a[k] = v,
                1 => b[k] = v,
                2 => a[k] = -v,
                _ => b[k] = -v,
            }
            pw *= 2;
        }
        let (a, b) = (IntPoly::new(a), IntPoly::new(b));
        let r = a.mul(&a).add(&b.mul(&b));
        identify(&r, &[self.clone()], |bx, _| Some(CBox::real(bx[0].im.clone())))
    }

    /// Modulus.
    pub fn abs(&self) -> AlgebraicNumber {
        if self.is_real() {
            return if self.sign().unwrap() < 0 { self.neg() } else { self.clone() };
        }
        let n = self.abs2();
        let r = n.vanishing_poly.subs_pow(2);
        identify(&r, &[self.clone()], |b, p| Some(CBox::real(b[0].abs(p))))
    }

    /// `|self|^2 = self * conj(self)`.
    pub fn abs2(&self) -> AlgebraicNumber {
        if self.is_real() {
            return self.mul(self);
        }
        self.mul(&self.conj())
    }

    /// `self^n` via the characteristic polynomial of a companion-matrix power.
    pub fn pow(&self, n: u64) -> AlgebraicNumber {
        if n == 0 {
            return AlgebraicNumber::one();
        }
        if n == 1 {
            return self.clone();
        }
        if let Some(g) = self.as_gaussian() {
            let (mut re, mut im) = (BigRational::one(), BigRational::zero());
            let (mut br, mut bi) = g;
            let mut e = n;
            while e > 0 {
                if e & 1 == 1 {
                    let t = &re * &br - &im * &bi;
                    im = &re * &bi + &im * &br;
                    re = t;
                }
                e >>= 1;
                if e > 0 {
                    let t = &br * &br - &bi * &bi;
                    bi = BigRational::from_integer(BigInt::from(2)) * &br * &bi;
                    br = t;
                }
            }
            return AlgebraicNumber::gaussian(&re, &im);
        }
        let p = &self.vanishing_poly;
        let d = p.degree();
        let l = p.lc();
        let q = p.monic_scaled();
        let mut m: Mat<BigInt> = vec![vec![BigInt::zero(); d]; d];
        for i in 1..d {
            m[i][i - 1] = BigInt::one();
        }
        for i in 0..d {
            m[i][d - 1] = -q.coeff(i);
        }
        let mn = mat_pow(&m, n);
        let cp = IntPoly::new(charpoly(&mn));
        // roots of cp are (l a)^n; substitute x -> l^n x
        let ln = num_traits::pow(l, n as usize);
        let r = cp.scale_x(&ln);
        identify(&r, &[self.clone()], move |b, pr| Some(b[0].pow(n, pr)))
    }

    /// Integer power, negative exponents through the inverse.
    pub fn powi(&self, n: i64) -> Result<AlgebraicNumber> {
        if n >= 0 {
            Ok(self.pow(n as u64))
        } else {
            Ok(self.inv()?.pow(n.unsigned_abs()))
        }
    }

    /// Least `n` with `self^n = 1`, if any.
    pub fn is_root_of_unity(&self) -> Option<u64> {
        if let Some(q) = self.as_rational() {
            return if q.is_one() {
                Some(1)
            } else if q == -BigRational::one() {
                Some(2)
            } else {
                None
            };
        }
        let mut a = self.clone();
        a.refine_bits(80);
        let m = a.enclosure().abs2(PREC);
        if !m.contains(&Dyadic::one()) {
            return None;
        }
        let deg = self.degree() as u64;
        let arg = a.enclosure().arg(PREC);
        let tau = crate::numeric::interval::pi(PREC).scale_pow2(1);
        let turns = arg.and_then(|g| g.div(&tau, PREC));
        for n in 1..=max_order_for_degree(deg) {
            if totient(n) > deg {
                continue;
            }
            if let Some(t) = &turns {
                // n * arg / 2pi must be an integer
                let x = t.mul_int(&BigInt::from(n), PREC);
                if x.lo.ceil() > x.hi.floor() {
                    continue;
                }
            }
            let xn1 = {
                let mut c = vec![BigInt::zero(); n as usize + 1];
                c[0] = -BigInt::one();
                c[n as usize] = BigInt::one();
                IntPoly::new(c)
            };
            let g = self.vanishing_poly.gcd(&xn1);
            if g.degree() > 0 && self.is_root_of_factor(&g) {
                return Some(n);
            }
        }
        None
    }

    /// Rational upper bound on the modulus.
    pub fn modulus_upper(&self) -> BigRational {
        self.enclosure().abs(64).hi.to_rational()
    }

    pub fn modulus_interval(&self, bits: i64) -> Interval {
        self.approx(bits).abs(PREC)
    }
}

/// Identify which root of `r` equals `f(operands)`.
pub(crate) fn identify<F>(r: &IntPoly, ops: &[AlgebraicNumber], f: F) -> AlgebraicNumber
where
    F: Fn(&[CBox], u32) -> Option<CBox>,
{
    assert!(!r.is_zero(), "resultant vanished identically");
    let sf = r.squarefree();
    if sf.degree() == 0 {
        panic!("result polynomial has no roots");
    }
    let mut roots = isolate_squarefree(&sf);
    let mut ops: Vec<AlgebraicNumber> = ops.to_vec();
    let mut prec = PREC;
    for _ in 0..10_000 {
        let boxes: Vec<CBox> = ops.iter().map(|o| o.enclosure()).collect();
        if let Some(e) = f(&boxes, prec) {
            let hits: Vec<usize> = (0..roots.len()).filter(|&i| roots[i].to_cbox().intersects(&e)).collect();
            assert!(!hits.is_empty(), "enclosure misses every root");
            if hits.len() == 1 {
                return AlgebraicNumber::from_parts(sf, roots.swap_remove(hits[0]));
            }
            for i in hits {
                let t = roots[i].half_width.mul_pow2(-2);
                roots[i] = refine_squarefree(&sf, &roots[i], &t);
            }
        }
        for o in ops.iter_mut() {
            o.halve();
        }
        prec += 16;
    }
    panic!("result identification did not converge");
}

/// Largest `n` with `phi(n) <= d`.
fn max_order_for_degree(d: u64) -> u64 {
    // phi(n) >= sqrt(n/2), so n <= 2 d^2 bounds the search
    let mut best = 1;
    for n in 1..=(2 * d * d + 2) {
        if totient(n) <= d {
            best = n;
        }
    }
    best
}

pub fn totient(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

fn nearest(d: &Dyadic) -> BigInt {
    d.add(&Dyadic::new(BigInt::one(), -1)).floor()
}

pub fn alg_arith(kind: ArithOp, a: &AlgebraicNumber, b: Option<&AlgebraicNumber>) -> Result<AlgebraicNumber> {
    let need = || b.ok_or_else(|| Error::Precondition("second operand required".into()));
    Ok(match kind {
        ArithOp::Add => a.add(need()?),
        ArithOp::Sub => a.sub(need()?),
        ArithOp::Mul => a.mul(need()?),
        ArithOp::Div => a.div(need()?)?,
        ArithOp::Neg => a.neg(),
        ArithOp::Conj => a.conj(),
        ArithOp::Re => a.re(),
        ArithOp::Im => a.im(),
        ArithOp::Abs => a.abs(),
    })
}

pub fn alg_sign(a: &AlgebraicNumber, real_required: bool) -> Result<i32> {
    if !a.is_real() {
        if real_required {
            return Err(Error::NotReal);
        }
        return Ok(if a.is_zero() { 0 } else { 1 });
    }
    a.sign()
}

pub fn alg_equal(a: &AlgebraicNumber, b: &AlgebraicNumber) -> bool {
    a.equal(b)
}

pub fn alg_compare_modulus(a: &AlgebraicNumber, b: &AlgebraicNumber) -> Ordering {
    a.compare_modulus(b)
}

/// Resultant of two integer polynomials, exposed for diagnostics.
pub fn int_resultant(p: &IntPoly, q: &IntPoly) -> BigInt {
    resultant(p, q)
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        if let Some((r, i)) = self.as_gaussian() {
            return write!(f, "{r} {} {}i", if i.is_negative() { "-" } else { "+" }, i.abs());
        }
        let (re, im) = self.to_f64();
        if self.is_real() {
            write!(f, "root of {} near {re:.12}", self.vanishing_poly)
        } else {
            write!(f, "root of {} near {re:.12}{:+.12}i", self.vanishing_poly, im)
        }
    }
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, o: &Self) -> bool {
        self.equal(o)
    }
}

/// Integer part helper used by callers needing small exponents.
pub fn to_u64(n: &BigInt) -> Option<u64> {
    n.to_u64()
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        rat(n, d)
    }

    fn sqrt2() -> AlgebraicNumber {
        isolate_roots(&IntPoly::from_i64(&[-2, 0, 1]))
            .unwrap()
            .into_iter()
            .find(|a| a.to_f64().0 > 0.0)
            .unwrap()
    }

    #[test]
    fn gaussian_products() {
        let l1 = AlgebraicNumber::gaussian(&q(3, 5), &q(4, 5));
        let l2 = AlgebraicNumber::gaussian(&q(4, 5), &q(3, 5));
        assert!(l1.mul(&l2).equal(&AlgebraicNumber::i()));
        assert!(l1.abs().equal(&AlgebraicNumber::one()));
        assert_eq!(l1.compare_modulus(&AlgebraicNumber::one()), Ordering::Equal);
        assert_eq!(l1.is_root_of_unity(), None);
        assert_eq!(AlgebraicNumber::i().is_root_of_unity(), Some(4));
        assert_eq!(AlgebraicNumber::from_i64(-1).is_root_of_unity(), Some(2));
    }

    #[test]
    fn sqrt2_arith() {
        let s = sqrt2();
        let z = s.add(&s.neg());
        assert!(z.is_zero());
        assert_eq!(s.sub(&AlgebraicNumber::one()).sign().unwrap(), 1);
        let two = s.mul(&s);
        assert_eq!(two.as_rational(), Some(q(2, 1)));
        let t = s.add(&s);
        assert!(t.poly().eval_cbox(&t.approx(100), 200).contains_zero());
        assert_eq!(AlgebraicNumber::from_i64(2).compare_modulus(&AlgebraicNumber::from_i64(3)), Ordering::Less);
    }

    #[test]
    fn generic_resultant_paths() {
        let s = sqrt2();
        let c = isolate_roots(&IntPoly::from_i64(&[-3, 0, 1])).unwrap().pop().unwrap();
        let sum = s.add(&c);
        let back = sum.sub(&c);
        assert!(back.equal(&s));
        let prod = s.mul(&c);
        let quo = prod.div(&c).unwrap();
        assert!(quo.equal(&s));
        let w = isolate_roots(&IntPoly::from_i64(&[1, 1, 1])).unwrap();
        let w0 = &w[0];
        assert_eq!(w0.is_root_of_unity(), Some(3));
        let r = w0.re();
        assert_eq!(r.as_rational(), Some(q(-1, 2)));
        let im = w0.im();
        assert!(im.mul(&im).equal(&AlgebraicNumber::from_rational(&q(3, 4))));
        assert!(w0.abs().equal(&AlgebraicNumber::one()));
        assert!(w0.pow(3).equal(&AlgebraicNumber::one()));
    }

    #[test]
    fn critical_sign_example() {
        let c1 = AlgebraicNumber::from_i64(-1);
        let d = AlgebraicNumber::from_i64(2);
        let v = d.sub(&c1.abs().mul_rational(&q(2, 1)));
        assert_eq!(alg_sign(&v, true).unwrap(), 0);
    }

    #[test]
    fn refine_nests() {
        let p = IntPoly::from_i64(&[5, -6, 5]);
        let roots = isolate_roots(&p).unwrap();
        let r = roots[0].refine(&BigRational::new(1.into(), BigInt::from(10).pow(20))).unwrap();
        assert!(roots[0].rect().contains(r.rect()));
        assert!(!r.rect().intersects(roots[1].rect()));
    }
}
