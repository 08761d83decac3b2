//! Certified complex root isolation and refinement for squarefree integer polynomials.
//!
//! Approximations come from Aberth's simultaneous iteration. Each approximation
//! `z_i` is certified by the inclusion disk `|z - z_i| <= n |W_i|`, where
//! `W_i = p(z_i) / (lc * prod_{j != i} (z_i - z_j))`; pairwise disjoint disks
//! each hold exactly one root. Disks meeting the real axis are widened into
//! squares symmetric about it, which then hold a real root.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::poly::IntPoly;
use crate::numeric::{CBox, Dyadic, Interval, Round};

/// Axis-aligned square `center ± half_width` in both coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "RectRepr", try_from = "RectRepr")]
pub struct Rectangle {
    pub center_re: Dyadic,
    pub center_im: Dyadic,
    pub half_width: Dyadic,
}

#[derive(Serialize, Deserialize)]
struct RectRepr {
    center_re: String,
    center_im: String,
    half_width: String,
}

impl From<Rectangle> for RectRepr {
    fn from(r: Rectangle) -> Self {
        RectRepr {
            center_re: r.center_re.to_rational().to_string(),
            center_im: r.center_im.to_rational().to_string(),
            half_width: r.half_width.to_rational().to_string(),
        }
    }
}

impl TryFrom<RectRepr> for Rectangle {
    type Error = String;
    fn try_from(r: RectRepr) -> Result<Self, String> {
        let conv = |s: &str| -> Result<Dyadic, String> {
            let q: BigRational = s.parse().map_err(|_| format!("bad rational {s}"))?;
            Dyadic::from_rational_exact(&q).ok_or_else(|| format!("non-dyadic rational {s}"))
        };
        Ok(Rectangle {
            center_re: conv(&r.center_re)?,
            center_im: conv(&r.center_im)?,
            half_width: conv(&r.half_width)?,
        })
    }
}

impl Rectangle {
    pub fn new(center_re: Dyadic, center_im: Dyadic, half_width: Dyadic) -> Self {
        debug_assert!(half_width.signum() > 0);
        Rectangle { center_re, center_im, half_width }
    }

    pub fn is_real(&self) -> bool {
        self.center_im.is_zero()
    }

    pub fn to_cbox(&self) -> CBox {
        CBox::square(&self.center_re, &self.center_im, &self.half_width)
    }

    pub fn re_interval(&self) -> Interval {
        Interval::around(&self.center_re, &self.half_width)
    }

    pub fn im_interval(&self) -> Interval {
        Interval::around(&self.center_im, &self.half_width)
    }

    pub fn intersects(&self, o: &Rectangle) -> bool {
        self.to_cbox().intersects(&o.to_cbox())
    }

    pub fn contains(&self, o: &Rectangle) -> bool {
        self.to_cbox().contains_box(&o.to_cbox())
    }

    pub fn conj(&self) -> Rectangle {
        Rectangle { center_re: self.center_re.clone(), center_im: self.center_im.neg(), half_width: self.half_width.clone() }
    }

    pub fn neg(&self) -> Rectangle {
        Rectangle { center_re: self.center_re.neg(), center_im: self.center_im.neg(), half_width: self.half_width.clone() }
    }

    pub fn center_re_rational(&self) -> BigRational {
        self.center_re.to_rational()
    }

    pub fn center_im_rational(&self) -> BigRational {
        self.center_im.to_rational()
    }

    pub fn half_width_rational(&self) -> BigRational {
        self.half_width.to_rational()
    }

    /// Smallest square containing the rectangle `re x im` and lying inside `self`,
    /// assuming `re x im` lies inside `self`.
    fn fit_inside(&self, re: &Interval, im: &Interval) -> Rectangle {
        let w = re.width().max_ref(&im.width()).clone();
        let h = w.mul_pow2(-1);
        let h = if h.is_zero() { self.half_width.mul_pow2(-60) } else { h };
        let place = |iv: &Interval, c: &Dyadic| -> Dyadic {
            // center in [iv.hi - h, iv.lo + h] clamped to [c - H + h, c + H - h]
            let lo = iv.hi.sub(&h).max_ref(&c.sub(&self.half_width).add(&h)).clone();
            let hi = iv.lo.add(&h).min_ref(&c.add(&self.half_width).sub(&h)).clone();
            let mid = iv.mid();
            if mid < lo {
                lo
            } else if mid > hi {
                hi
            } else {
                mid
            }
        };
        let cr = place(re, &self.center_re);
        let ci = if self.is_real() && im.lo.signum() <= 0 && im.hi.signum() >= 0 {
            Dyadic::zero()
        } else {
            place(im, &self.center_im)
        };
        Rectangle::new(cr, ci, h)
    }
}

#[derive(Clone, Debug)]
struct C {
    re: Dyadic,
    im: Dyadic,
}

impl C {
    fn new(re: Dyadic, im: Dyadic) -> Self {
        C { re, im }
    }
    fn r(&self, p: u32) -> C {
        C::new(self.re.round(p, Round::Down), self.im.round(p, Round::Down))
    }
    fn add(&self, o: &C) -> C {
        C::new(self.re.add(&o.re), self.im.add(&o.im))
    }
    fn sub(&self, o: &C) -> C {
        C::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }
    fn mul(&self, o: &C, p: u32) -> C {
        C::new(self.re.mul(&o.re).sub(&self.im.mul(&o.im)), self.re.mul(&o.im).add(&self.im.mul(&o.re))).r(p)
    }
    fn norm2(&self) -> Dyadic {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }
    fn recip(&self, p: u32) -> Option<C> {
        let n = self.norm2();
        if n.is_zero() {
            return None;
        }
        Some(C::new(self.re.div(&n, p, Round::Down), self.im.neg().div(&n, p, Round::Down)))
    }
    fn div(&self, o: &C, p: u32) -> Option<C> {
        Some(self.mul(&o.recip(p)?, p))
    }
    fn mag(&self) -> i64 {
        self.re.magnitude().max(self.im.magnitude())
    }
}

fn eval_pd(p: &[Dyadic], z: &C, prec: u32) -> (C, C) {
    let zero = C::new(Dyadic::zero(), Dyadic::zero());
    let mut v = zero.clone();
    let mut d = zero;
    for a in p.iter().rev() {
        d = d.mul(z, prec).add(&v);
        v = v.mul(z, prec).add(&C::new(a.clone(), Dyadic::zero())).r(prec);
    }
    (v, d)
}

fn initial_guesses(p: &IntPoly) -> Vec<C> {
    let n = p.degree();
    let lc = p.lc().abs();
    let c0 = p.coeffs().iter().find(|c| !c.is_zero()).unwrap().abs();
    let zeros_at_origin = p.coeffs().iter().take_while(|c| c.is_zero()).count();
    let m = n - zeros_at_origin;
    let log_r = if m == 0 {
        0.0
    } else {
        (c0.bits() as f64 - lc.bits() as f64) / m as f64
    };
    let r = 2f64.powf(log_r.clamp(-900.0, 900.0));
    (0..n)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            let rad = r * (1.0 + 0.05 * (k % 3) as f64);
            C::new(Dyadic::from_f64(rad * ang.cos()), Dyadic::from_f64(rad * ang.sin()))
        })
        .collect()
}

fn aberth(p: &IntPoly, z: &mut [C], prec: u32, max_iter: usize) {
    let coeffs: Vec<Dyadic> = p.coeffs().iter().map(Dyadic::from_int).collect();
    let n = z.len();
    let mut done = vec![false; n];
    for _ in 0..max_iter {
        let mut all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (v, d) = eval_pd(&coeffs, &z[i], prec);
            if v.re.is_zero() && v.im.is_zero() {
                done[i] = true;
                continue;
            }
            let ratio = match v.div(&d, prec) {
                Some(r) => r,
                None => {
                    // nudge off a critical point
                    z[i] = z[i].add(&C::new(Dyadic::new(BigInt::one(), z[i].mag().min(0) - 20), Dyadic::zero()));
                    all_done = false;
                    continue;
                }
            };
            let mut s = C::new(Dyadic::zero(), Dyadic::zero());
            for j in 0..n {
                if j != i {
                    if let Some(t) = z[i].sub(&z[j]).recip(prec) {
                        s = s.add(&t);
                    }
                }
            }
            let one = C::new(Dyadic::one(), Dyadic::zero());
            let den = one.sub(&ratio.mul(&s, prec));
            let w = ratio.div(&den, prec).unwrap_or(ratio);
            z[i] = z[i].sub(&w).r(prec);
            let scale = z[i].mag().max(0);
            if w.mag() < scale - (prec as i64) + 4 {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            break;
        }
    }
}

/// Try to certify approximations; returns isolating squares on success.
fn certify(p: &IntPoly, z: &[C], prec: u32) -> Option<Vec<Rectangle>> {
    let n = z.len();
    let lc = Interval::from_int(&p.lc());
    let mut boxes = Vec::with_capacity(n);
    for i in 0..n {
        let zi = CBox::point(z[i].re.clone(), z[i].im.clone());
        let v = p.eval_cbox(&zi, prec + 16);
        let mut den = CBox::real(lc.clone());
        for (j, zj) in z.iter().enumerate() {
            if j != i {
                let diff = CBox::point(z[i].re.sub(&zj.re), z[i].im.sub(&zj.im));
                den = den.mul(&diff, prec + 16);
            }
        }
        let den_lo = den.abs2(prec).lo;
        if den_lo.signum() <= 0 {
            return None;
        }
        let num_hi = v.abs2(prec).hi;
        let ratio = num_hi.div(&den_lo, 64, Round::Up);
        let w = crate::numeric::interval::sqrt_dyadic(&ratio, 64, Round::Up);
        let mut r = w.mul_int(&BigInt::from(n)).round(64, Round::Up);
        if r.is_zero() {
            r = Dyadic::new(BigInt::one(), z[i].mag().max(0) - prec as i64);
        }
        boxes.push((Rectangle::new(z[i].re.clone(), z[i].im.clone(), r.clone()), r));
    }
    // snap disks meeting the real axis
    let mut out: Vec<Rectangle> = boxes
        .into_iter()
        .map(|(b, r)| {
            if b.center_im.abs() <= r {
                let h = r.add(&b.center_im.abs());
                Rectangle::new(b.center_re, Dyadic::zero(), h)
            } else {
                b
            }
        })
        .collect();
    for i in 0..n {
        for j in i + 1..n {
            if out[i].intersects(&out[j]) {
                return None;
            }
        }
    }
    // a real-snapped square mirrors onto itself; conjugate approximations keep distinct squares
    for b in out.iter_mut() {
        b.half_width = b.half_width.round(64, Round::Up);
    }
    Some(out)
}

/// Isolating squares for all roots of a squarefree polynomial of degree >= 1.
pub fn isolate_squarefree(p: &IntPoly) -> Vec<Rectangle> {
    assert!(p.degree() >= 1, "isolation needs degree >= 1");
    if p.degree() == 1 {
        let q = BigRational::new(-p.coeff(0), p.coeff(1));
        return vec![rational_box(&q)];
    }
    let mut z = initial_guesses(p);
    let mut prec = 64u32;
    loop {
        aberth(p, &mut z, prec, 200 + 10 * p.degree());
        if let Some(b) = certify(p, &z, prec) {
            return b;
        }
        prec *= 2;
        assert!(prec <= 1 << 20, "root isolation failed to converge");
    }
}

/// Tiny square around a rational point.
pub fn rational_box(q: &BigRational) -> Rectangle {
    match Dyadic::from_rational_exact(q) {
        Some(d) => {
            let h = Dyadic::new(BigInt::one(), d.magnitude().max(0) - 64);
            Rectangle::new(d, Dyadic::zero(), h)
        }
        None => {
            let lo = Dyadic::from_rational(q, 96, Round::Down);
            let hi = Dyadic::from_rational(q, 96, Round::Up);
            let c = lo.add(&hi).mul_pow2(-1);
            let h = hi.sub(&lo);
            Rectangle::new(c, Dyadic::zero(), h)
        }
    }
}

/// Shrink an isolating square of a squarefree `p` to half-width `<= target`,
/// keeping it nested in the input.
pub fn refine_squarefree(p: &IntPoly, b: &Rectangle, target: &Dyadic) -> Rectangle {
    if b.half_width <= *target {
        return b.clone();
    }
    if b.is_real() {
        refine_real(p, b, target)
    } else {
        refine_complex(p, b, target)
    }
}

fn refine_real(p: &IntPoly, b: &Rectangle, target: &Dyadic) -> Rectangle {
    let mut lo = b.center_re.sub(&b.half_width);
    let mut hi = b.center_re.add(&b.half_width);
    let sgn = |x: &Dyadic| p.eval_dyadic(x).signum();
    let mut s_lo = sgn(&lo);
    if s_lo == 0 {
        return point_box(b, &lo, target);
    }
    if sgn(&hi) == 0 {
        return point_box(b, &hi, target);
    }
    let two_target = target.mul_pow2(1);
    while hi.sub(&lo) > two_target {
        // secant-free bisection; exact signs
        let mid = lo.add(&hi).mul_pow2(-1);
        let s = sgn(&mid);
        if s == 0 {
            return point_box(b, &mid, target);
        }
        if s == s_lo {
            lo = mid;
            s_lo = s;
        } else {
            hi = mid;
        }
    }
    let c = lo.add(&hi).mul_pow2(-1);
    let h = hi.sub(&lo).mul_pow2(-1);
    Rectangle::new(c, Dyadic::zero(), h)
}

fn point_box(b: &Rectangle, x: &Dyadic, target: &Dyadic) -> Rectangle {
    let h = target.min_ref(&b.half_width).mul_pow2(-1);
    let re = Interval::around(x, &h);
    let im = Interval::around(&Dyadic::zero(), &h);
    b.fit_inside(&re, &im)
}

fn refine_complex(p: &IntPoly, b: &Rectangle, target: &Dyadic) -> Rectangle {
    let n = BigInt::from(p.degree());
    let dp = p.derivative();
    let mut cur = b.clone();
    let mut prec = (64 - target.magnitude()).max(64) as u32 + 32;
    let mut stalls = 0;
    while cur.half_width > *target {
        let z = CBox::point(cur.center_re.clone(), cur.center_im.clone());
        let v = p.eval_cbox(&z, prec);
        let d = dp.eval_cbox(&z, prec);
        let (vr, vi) = (v.re.mid(), v.im.mid());
        let (dr, di) = (d.re.mid(), d.im.mid());
        let step = C::new(vr, vi).div(&C::new(dr, di), prec);
        let accepted = step.and_then(|s| {
            let zr = cur.center_re.sub(&s.re).round(prec, Round::Down);
            let zi = cur.center_im.sub(&s.im).round(prec, Round::Down);
            let zn = CBox::point(zr.clone(), zi.clone());
            let pv = p.eval_cbox(&zn, prec).abs2(prec).hi;
            let pd = dp.eval_cbox(&zn, prec).abs2(prec).lo;
            if pd.signum() <= 0 {
                return None;
            }
            let q = crate::numeric::interval::sqrt_dyadic(&pv.div(&pd, 64, Round::Up), 64, Round::Up);
            let mut r = q.mul_int(&n).round(64, Round::Up);
            if r.is_zero() {
                r = target.mul_pow2(-1);
            }
            let cand = Rectangle::new(zr, zi, r);
            cur.contains(&cand).then_some(cand)
        });
        match accepted {
            Some(c) if c.half_width < cur.half_width => {
                cur = c;
                stalls = 0;
            }
            _ => {
                stalls += 1;
                prec *= 2;
                if stalls > 2 {
                    cur = reisolate_in(p, &cur, prec);
                    stalls = 0;
                }
            }
        }
    }
    cur
}

/// Fallback: re-run simultaneous isolation at higher precision and pick the
/// unique new square meeting `cur`.
fn reisolate_in(p: &IntPoly, cur: &Rectangle, prec: u32) -> Rectangle {
    let mut z = initial_guesses(p);
    let mut pr = 64;
    loop {
        aberth(p, &mut z, pr, 400);
        if pr >= prec {
            if let Some(bs) = certify(p, &z, pr) {
                let hits: Vec<&Rectangle> = bs.iter().filter(|b| b.intersects(cur)).collect();
                if hits.len() == 1 && hits[0].half_width < cur.half_width {
                    let h = hits[0];
                    let re = h.re_interval().intersect(&cur.re_interval()).unwrap();
                    let im = h.im_interval().intersect(&cur.im_interval()).unwrap();
                    return cur.fit_inside(&re, &im);
                }
            }
        }
        pr *= 2;
        assert!(pr <= 1 << 20, "refinement failed to converge");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2_pair() {
        let p = IntPoly::from_i64(&[-2, 0, 1]);
        let mut b = isolate_squarefree(&p);
        b.sort_by(|x, y| x.center_re.cmp(&y.center_re));
        assert_eq!(b.len(), 2);
        assert!(b.iter().all(|r| r.is_real()));
        let r = refine_squarefree(&p, &b[1], &Dyadic::new(BigInt::one(), -40));
        assert!(b[1].contains(&r));
        assert!((r.center_re.to_f64() - 2f64.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn unit_circle_pair() {
        let p = IntPoly::from_i64(&[5, -6, 5]);
        let b = isolate_squarefree(&p);
        assert_eq!(b.len(), 2);
        assert!(!b[0].intersects(&b[1]));
        for r in &b {
            assert!(!r.is_real());
            let t = refine_squarefree(&p, r, &Dyadic::new(BigInt::one(), -70));
            assert!(r.contains(&t));
            assert!(t.half_width <= Dyadic::new(BigInt::one(), -70));
            assert!((t.center_re.to_f64() - 0.6).abs() < 1e-15);
        }
    }

    #[test]
    fn clustered_and_higher_degree() {
        // (x - 1)(x - 1 - 2^-30)... via (2^30 x - 2^30)(2^30 x - 2^30 - 1) and x^7 - 3
        let a = BigInt::one() << 30u32;
        let p = IntPoly::new(vec![-a.clone(), a.clone()]).mul(&IntPoly::new(vec![-a.clone() - 1, a.clone()]));
        let b = isolate_squarefree(&p);
        assert_eq!(b.len(), 2);
        let q = IntPoly::from_i64(&[-3, 0, 0, 0, 0, 0, 0, 1]);
        let b = isolate_squarefree(&q);
        assert_eq!(b.len(), 7);
        assert_eq!(b.iter().filter(|r| r.is_real()).count(), 1);
    }
}
