//! Rectangular complex enclosures built from two real intervals.

use num_bigint::BigInt;

use super::dyadic::Dyadic;
use super::interval::{atan_interval, pi, Interval};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CBox {
    pub re: Interval,
    pub im: Interval,
}

impl CBox {
    pub fn new(re: Interval, im: Interval) -> Self {
        CBox { re, im }
    }

    pub fn real(re: Interval) -> Self {
        CBox { re, im: Interval::zero() }
    }

    pub fn point(re: Dyadic, im: Dyadic) -> Self {
        CBox { re: Interval::point(re), im: Interval::point(im) }
    }

    pub fn zero() -> Self {
        CBox::real(Interval::zero())
    }

    pub fn one() -> Self {
        CBox::real(Interval::one())
    }

    /// Square box of half-width `r` around `(cr, ci)`.
    pub fn square(cr: &Dyadic, ci: &Dyadic, r: &Dyadic) -> Self {
        CBox { re: Interval::around(cr, r), im: Interval::around(ci, r) }
    }

    pub fn add(&self, o: &CBox, prec: u32) -> CBox {
        CBox { re: self.re.add(&o.re, prec), im: self.im.add(&o.im, prec) }
    }

    pub fn sub(&self, o: &CBox, prec: u32) -> CBox {
        CBox { re: self.re.sub(&o.re, prec), im: self.im.sub(&o.im, prec) }
    }

    pub fn neg(&self) -> CBox {
        CBox { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> CBox {
        CBox { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &CBox, prec: u32) -> CBox {
        let p = prec + 8;
        let re = self.re.mul(&o.re, p).sub(&self.im.mul(&o.im, p), prec);
        let im = self.re.mul(&o.im, p).add(&self.im.mul(&o.re, p), prec);
        CBox { re, im }
    }

    pub fn mul_real(&self, r: &Interval, prec: u32) -> CBox {
        CBox { re: self.re.mul(r, prec), im: self.im.mul(r, prec) }
    }

    pub fn mul_int(&self, k: &BigInt, prec: u32) -> CBox {
        CBox { re: self.re.mul_int(k, prec), im: self.im.mul_int(k, prec) }
    }

    pub fn scale_pow2(&self, k: i64) -> CBox {
        CBox { re: self.re.scale_pow2(k), im: self.im.scale_pow2(k) }
    }

    pub fn sqr(&self, prec: u32) -> CBox {
        let p = prec + 8;
        let re = self.re.sqr(p).sub(&self.im.sqr(p), prec);
        let im = self.re.mul(&self.im, p).scale_pow2(1);
        CBox { re, im }
    }

    /// `|z|^2` as a real interval.
    pub fn abs2(&self, prec: u32) -> Interval {
        self.re.sqr(prec + 8).add(&self.im.sqr(prec + 8), prec)
    }

    pub fn abs(&self, prec: u32) -> Interval {
        self.abs2(prec + 8).sqrt(prec)
    }

    pub fn recip(&self, prec: u32) -> Option<CBox> {
        let d = self.abs2(prec + 8);
        if d.contains_zero() {
            return None;
        }
        let inv = d.recip(prec + 8)?;
        Some(self.conj().mul_real(&inv, prec))
    }

    pub fn div(&self, o: &CBox, prec: u32) -> Option<CBox> {
        Some(self.mul(&o.recip(prec + 8)?, prec))
    }

    pub fn pow(&self, n: u64, prec: u32) -> CBox {
        let mut result = CBox::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base, prec);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr(prec);
            }
        }
        result
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn intersects(&self, o: &CBox) -> bool {
        self.re.overlaps(&o.re) && self.im.overlaps(&o.im)
    }

    pub fn contains_box(&self, o: &CBox) -> bool {
        self.re.contains_interval(&o.re) && self.im.contains_interval(&o.im)
    }

    pub fn hull(&self, o: &CBox) -> CBox {
        CBox { re: self.re.hull(&o.re), im: self.im.hull(&o.im) }
    }

    /// Largest half-width over both axes.
    pub fn radius(&self) -> Dyadic {
        self.re.width().max_ref(&self.im.width()).mul_pow2(-1)
    }

    pub fn center(&self) -> (Dyadic, Dyadic) {
        (self.re.mid(), self.im.mid())
    }

    /// Enclosure of the principal argument in a branch avoiding the box.
    ///
    /// Returns `None` when the box contains zero. The result may exceed
    /// `(-pi, pi]` when the box straddles the negative real axis.
    pub fn arg(&self, prec: u32) -> Option<Interval> {
        if self.contains_zero() {
            return None;
        }
        let p = prec + 8;
        let corners = [
            (&self.re.lo, &self.im.lo),
            (&self.re.lo, &self.im.hi),
            (&self.re.hi, &self.im.lo),
            (&self.re.hi, &self.im.hi),
        ];
        let pi_i = pi(p);
        if self.re.lo.signum() > 0 {
            // right half-plane: arg = atan(y/x)
            let vals: Vec<Interval> = corners
                .iter()
                .map(|(x, y)| {
                    let q = Interval::point((*y).clone()).div(&Interval::point((*x).clone()), p).unwrap();
                    atan_interval(&q, p)
                })
                .collect();
            return Some(hull_all(&vals));
        }
        if self.im.lo.signum() > 0 {
            // upper half-plane: arg = pi/2 - atan(x/y)
            let vals: Vec<Interval> = corners
                .iter()
                .map(|(x, y)| {
                    let q = Interval::point((*x).clone()).div(&Interval::point((*y).clone()), p).unwrap();
                    pi_i.scale_pow2(-1).sub(&atan_interval(&q, p), p)
                })
                .collect();
            return Some(hull_all(&vals));
        }
        if self.im.hi.signum() < 0 {
            // lower half-plane: arg = -pi/2 - atan(x/y)
            let vals: Vec<Interval> = corners
                .iter()
                .map(|(x, y)| {
                    let q = Interval::point((*x).clone()).div(&Interval::point((*y).clone()), p).unwrap();
                    pi_i.scale_pow2(-1).neg().sub(&atan_interval(&q, p), p)
                })
                .collect();
            return Some(hull_all(&vals));
        }
        // left half-plane crossing the negative real axis: arg = pi + atan(y/x) in (pi/2, 3pi/2)
        let vals: Vec<Interval> = corners
            .iter()
            .map(|(x, y)| {
                let q = Interval::point((*y).clone()).div(&Interval::point((*x).clone()), p).unwrap();
                pi_i.add(&atan_interval(&q, p), p)
            })
            .collect();
        Some(hull_all(&vals))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

fn hull_all(v: &[Interval]) -> Interval {
    let mut h = v[0].clone();
    for x in &v[1..] {
        h = h.hull(x);
    }
    h
}
