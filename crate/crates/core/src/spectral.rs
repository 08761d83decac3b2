//! Exponential-polynomial solutions, dominance analysis and residual tail bounds.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::algebraic::{identify, isolate_roots, AlgebraicNumber};
use crate::algebra::matrix::{charpoly, solve_rational, Mat};
use crate::algebra::{squarefree_decompose, IntPoly, QPoly};
use crate::error::{Error, Result};
use crate::lrs::Lrs;
use crate::numeric::interval::{exp_interval, ln_interval};
use crate::numeric::{CBox, Dyadic, Interval, Round};

/// One summand `P(n) * root^n`.
#[derive(Clone, Debug)]
pub struct ExpTerm {
    pub root: AlgebraicNumber,
    /// Coefficients of `P`, constant term first.
    pub coeff_poly: Vec<AlgebraicNumber>,
    pub multiplicity: usize,
    factor: IntPoly,
    field_coeffs: Vec<QPoly>,
}

#[derive(Clone, Debug, Default)]
pub struct ExpPoly {
    pub terms: Vec<ExpTerm>,
}

/// Normalized view `u_n / rho^n = A(n) + sum P_i(n) lambda_i^n + r(n)`.
#[derive(Clone, Debug)]
pub struct SpectralData {
    pub rho: Option<AlgebraicNumber>,
    /// `A(n)`, the coefficient polynomial of `rho`.
    pub rho_coeff: Vec<AlgebraicNumber>,
    pub dominant_group: Vec<DominantEntry>,
    pub residual: Vec<ResidualEntry>,
    /// Terms of maximal modulus (filled whether or not `rho` exists).
    pub top_terms: Vec<usize>,
    pub tail_epsilon: BigRational,
    pub tail_n: BigInt,
}

#[derive(Clone, Debug)]
pub struct DominantEntry {
    pub root: AlgebraicNumber,
    pub lambda: AlgebraicNumber,
    pub coeff_poly: Vec<AlgebraicNumber>,
}

#[derive(Clone, Debug)]
pub struct ResidualEntry {
    pub root: AlgebraicNumber,
    pub coeff_poly: Vec<AlgebraicNumber>,
    /// Rational upper bound on `|root| / rho`, strictly below 1.
    pub modulus_bound: BigRational,
    /// Rational upper bound on the sum of coefficient magnitudes.
    pub height_bound: BigRational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignPolicy {
    pub exact_below: u64,
    pub max_precision_bits: u32,
}

impl Default for SignPolicy {
    fn default() -> Self {
        SignPolicy { exact_below: 2000, max_precision_bits: 4096 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TermSign {
    Negative,
    Zero,
    Nonnegative,
    Unresolved,
}

/// Power sums `s_0 .. s_{count-1}` of the roots of a monic `f`.
pub fn power_sums(f: &QPoly, count: usize) -> Vec<BigRational> {
    let d = f.degree();
    let c = |i: usize| f.coeff(i);
    let mut s: Vec<BigRational> = Vec::with_capacity(count);
    for m in 0..count {
        if m == 0 {
            s.push(BigRational::from_integer(BigInt::from(d)));
            continue;
        }
        let mut acc = BigRational::zero();
        for i in 1..m.min(d + 1) {
            acc += c(d - i) * &s[m - i];
        }
        if m <= d {
            acc += c(d - m) * BigRational::from_integer(BigInt::from(m));
        }
        s.push(-acc);
    }
    s
}

/// `g(root)` where `root` is a root of the squarefree `f`.
pub fn field_element(f: &IntPoly, g: &QPoly, root: &AlgebraicNumber) -> AlgebraicNumber {
    let fm = f.to_qpoly().monic();
    let g = g.rem(&fm);
    if g.degree() < 1 {
        return AlgebraicNumber::from_rational(&g.coeff(0));
    }
    if let Some(q) = root.as_rational() {
        return AlgebraicNumber::from_rational(&g.eval(&q));
    }
    let d = fm.degree();
    // multiplication-by-g matrix on the basis 1, x, ..., x^(d-1)
    let mut m: Mat<BigRational> = vec![vec![BigRational::zero(); d]; d];
    let mut col = g.clone();
    let x = QPoly::x();
    for j in 0..d {
        for i in 0..d {
            m[i][j] = col.coeff(i);
        }
        col = col.mulmod(&x, &fm);
    }
    let cp = QPoly::new(charpoly(&m)).to_int_primitive();
    let g2 = g.clone();
    identify(&cp, std::slice::from_ref(root), move |b, p| Some(g2.eval_cbox(&b[0], p)))
}

fn rpow(n: u64, l: usize) -> BigRational {
    if l == 0 {
        BigRational::one()
    } else {
        BigRational::from_integer(num_traits::pow(BigInt::from(n), l))
    }
}

/// Exponential-polynomial solution of `u`.
pub fn exp_poly(u: &Lrs) -> Result<ExpPoly> {
    if u.is_zero_sequence() {
        return Ok(ExpPoly::default());
    }
    let k = u.order();
    let factors = squarefree_decompose(&u.char_poly())?;
    let mut layout: Vec<(usize, usize, usize)> = vec![]; // (factor, l, t)
    let mut sums = vec![];
    for (fi, (f, mult)) in factors.iter().enumerate() {
        let fm = f.to_qpoly().monic();
        sums.push(power_sums(&fm, 2 * k + 1));
        for l in 0..*mult {
            for t in 0..f.degree() {
                layout.push((fi, l, t));
            }
        }
    }
    if layout.len() != k {
        return Err(Error::Internal("factor degrees do not add up to the order".into()));
    }
    let a: Mat<BigRational> = (0..k as u64)
        .map(|n| layout.iter().map(|&(fi, l, t)| rpow(n, l) * &sums[fi][t + n as usize]).collect())
        .collect();
    let b: Vec<BigRational> = u.initial().iter().map(|x| BigRational::from_integer(x.clone())).collect();
    let y = solve_rational(&a, &b).ok_or_else(|| Error::Internal("singular coefficient system".into()))?;
    let mut terms = vec![];
    for (fi, (f, mult)) in factors.iter().enumerate() {
        let d = f.degree();
        let field_coeffs: Vec<QPoly> = (0..*mult)
            .map(|l| {
                let c: Vec<BigRational> = (0..d)
                    .map(|t| {
                        let idx = layout.iter().position(|&e| e == (fi, l, t)).unwrap();
                        y[idx].clone()
                    })
                    .collect();
                QPoly::new(c)
            })
            .collect();
        if field_coeffs.iter().all(|g| g.is_zero()) {
            continue;
        }
        for root in isolate_roots(f)? {
            let mut cp: Vec<AlgebraicNumber> = field_coeffs.iter().map(|g| field_element(f, g, &root)).collect();
            while cp.last().is_some_and(|c| c.is_zero()) {
                cp.pop();
            }
            if cp.is_empty() {
                continue;
            }
            terms.push(ExpTerm {
                root,
                coeff_poly: cp,
                multiplicity: *mult,
                factor: f.clone(),
                field_coeffs: field_coeffs.clone(),
            });
        }
    }
    Ok(ExpPoly { terms })
}

fn poly_box(cp: &[CBox], n: u64, prec: u32) -> CBox {
    let nb = Interval::from_int(&BigInt::from(n));
    let mut acc = CBox::zero();
    for c in cp.iter().rev() {
        acc = acc.mul_real(&nb, prec).add(c, prec);
    }
    acc
}

impl ExpTerm {
    /// The coefficient polynomial as field elements over the defining factor.
    pub fn field_coeffs(&self) -> (&IntPoly, &[QPoly]) {
        (&self.factor, &self.field_coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeff_poly.len() - 1
    }

    fn refined(&self, bits: i64) -> ExpTerm {
        let mut t = self.clone();
        t.root.refine_bits(bits);
        for c in t.coeff_poly.iter_mut() {
            c.refine_bits(bits);
        }
        t
    }

    fn enclose_current(&self, n: u64, prec: u32) -> CBox {
        let cp: Vec<CBox> = self.coeff_poly.iter().map(|c| c.enclosure()).collect();
        poly_box(&cp, n, prec).mul(&self.root.enclosure().pow(n, prec), prec)
    }
}

impl ExpPoly {
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Same terms with boxes below relative width `2^-bits`.
    pub fn refined(&self, bits: i64) -> ExpPoly {
        ExpPoly { terms: self.terms.iter().map(|t| t.refined(bits)).collect() }
    }

    /// Certified enclosure of `u_n` from the current boxes.
    pub fn enclose_current(&self, n: u64, prec: u32) -> CBox {
        self.terms.iter().fold(CBox::zero(), |acc, t| acc.add(&t.enclose_current(n, prec), prec))
    }

    /// Certified enclosure of `u_n` with about `bits` bits of working accuracy.
    pub fn enclose(&self, n: u64, bits: u32) -> CBox {
        let extra = 64 - n.max(1).leading_zeros() as i64 + 8;
        let r = self.refined(bits as i64 + extra);
        r.enclose_current(n, bits + extra as u32 + 32)
    }

    /// Drop the terms of maximal modulus.
    pub fn strip_dominant(&self) -> ExpPoly {
        let top = top_class(&self.terms);
        ExpPoly {
            terms: self.terms.iter().enumerate().filter(|(i, _)| !top.contains(i)).map(|(_, t)| t.clone()).collect(),
        }
    }

    /// Drop the terms at the given indices.
    pub fn without(&self, idx: &[usize]) -> ExpPoly {
        ExpPoly {
            terms: self.terms.iter().enumerate().filter(|(i, _)| !idx.contains(i)).map(|(_, t)| t.clone()).collect(),
        }
    }

    pub fn debug_dump(&self) -> String {
        let mut s = String::new();
        for t in &self.terms {
            let cs: Vec<String> = t.coeff_poly.iter().map(|c| c.to_string()).collect();
            s.push_str(&format!("[{}] * ({})^n\n", cs.join(", "), t.root));
        }
        s
    }
}

/// Indices of the terms of maximal modulus.
fn top_class(terms: &[ExpTerm]) -> Vec<usize> {
    let mut top: Vec<usize> = vec![];
    for i in 0..terms.len() {
        if top.is_empty() {
            top.push(i);
            continue;
        }
        match terms[i].root.compare_modulus(&terms[top[0]].root) {
            Ordering::Greater => top = vec![i],
            Ordering::Equal => top.push(i),
            Ordering::Less => {}
        }
    }
    top
}

fn upper_abs(a: &AlgebraicNumber) -> BigRational {
    if let Some(q) = a.as_rational() {
        return q.abs();
    }
    let b = a.approx(64);
    let hi = b.abs(96).hi;
    dyadic_ceil_grid(&hi, 64)
}

/// Round `x` up onto the grid `2^-t` (keeps denominators small).
fn dyadic_ceil_grid(x: &Dyadic, t: i64) -> BigRational {
    let scaled = x.mul_pow2(t).ceil();
    BigRational::new(scaled, BigInt::one() << t as usize)
}

/// Rational upper bound on `|g| / rho`, strictly below 1, for `|g| < rho`.
fn ratio_bound(g: &AlgebraicNumber, rho: &AlgebraicNumber) -> BigRational {
    if let (Some(a), Some(b)) = (g.as_rational(), rho.as_rational()) {
        return a.abs() / b;
    }
    let mut bits = 64i64;
    loop {
        let gb = g.approx(bits).abs(bits as u32 + 32);
        let rb = rho.approx(bits).re;
        if let Some(q) = gb.div(&rb, bits as u32 + 32) {
            let cand = dyadic_ceil_grid(&q.hi, bits);
            if cand < BigRational::one() {
                return cand;
            }
        }
        bits *= 2;
    }
}

pub fn coeff_height_bound(cp: &[AlgebraicNumber]) -> BigRational {
    cp.iter().map(upper_abs).fold(BigRational::zero(), |a, b| a + b)
}

/// Split the exponential polynomial around the dominant modulus.
pub fn dominance(ep: &ExpPoly) -> Result<SpectralData> {
    let top = top_class(&ep.terms);
    let half = BigRational::new(1.into(), 2.into());
    let mut sd = SpectralData {
        rho: None,
        rho_coeff: vec![],
        dominant_group: vec![],
        residual: vec![],
        top_terms: top.clone(),
        tail_epsilon: half,
        tail_n: BigInt::zero(),
    };
    let rho_idx = top.iter().copied().find(|&i| {
        let r = &ep.terms[i].root;
        r.is_real() && r.sign().unwrap_or(0) > 0
    });
    let Some(ri) = rho_idx else { return Ok(sd) };
    let rho = ep.terms[ri].root.clone();
    sd.rho_coeff = ep.terms[ri].coeff_poly.clone();
    let mut done: Vec<usize> = vec![];
    for &i in &top {
        if i == ri || done.contains(&i) {
            continue;
        }
        let t = &ep.terms[i];
        let lambda = t.root.div(&rho)?;
        sd.dominant_group.push(DominantEntry { root: t.root.clone(), lambda: lambda.clone(), coeff_poly: t.coeff_poly.clone() });
        done.push(i);
        if !t.root.is_real() {
            // the conjugate term carries the conjugate data
            if let Some(j) = top.iter().copied().find(|&j| !done.contains(&j) && j != ri && ep.terms[j].root.equal(&t.root.conj())) {
                let tj = &ep.terms[j];
                sd.dominant_group.push(DominantEntry { root: tj.root.clone(), lambda: lambda.conj(), coeff_poly: tj.coeff_poly.clone() });
                done.push(j);
            }
        }
    }
    for (i, t) in ep.terms.iter().enumerate() {
        if top.contains(&i) {
            continue;
        }
        sd.residual.push(ResidualEntry {
            root: t.root.clone(),
            coeff_poly: t.coeff_poly.clone(),
            modulus_bound: ratio_bound(&t.root, &rho),
            height_bound: coeff_height_bound(&t.coeff_poly),
        });
    }
    sd.rho = Some(rho);
    let (eps, n) = tail_bound(&sd);
    sd.tail_epsilon = eps;
    sd.tail_n = n;
    Ok(sd)
}

/// `(epsilon, N)` with `|r(n)| < (1 - epsilon)^n` for all `n > N`.
pub fn tail_bound(sd: &SpectralData) -> (BigRational, BigInt) {
    let parts: Vec<(BigRational, BigRational, usize)> = sd
        .residual
        .iter()
        .map(|r| (r.modulus_bound.clone(), r.height_bound.clone(), r.coeff_poly.len() - 1))
        .collect();
    tail_bound_parts(&parts)
}

/// Tail bound from `(mu_i, H_i, d_i)` triples with `mu_i < 1`.
pub fn tail_bound_parts(parts: &[(BigRational, BigRational, usize)]) -> (BigRational, BigInt) {
    let one = BigRational::one();
    let half = BigRational::new(1.into(), 2.into());
    if parts.is_empty() {
        return (half, BigInt::zero());
    }
    let mu = parts.iter().map(|p| p.0.clone()).max().unwrap();
    let base = (&one + &mu) * &half; // 1 - epsilon
    let eps = &one - &base;
    let q = &mu / &base;
    let terms: Vec<(BigRational, usize)> = parts.iter().map(|p| (p.1.clone(), p.2)).collect();
    let fails = |n: u64| envelope_at_least_one(&terms, &q, n);
    let n0 = monotone_from(&q, terms.iter().map(|t| t.1).max().unwrap_or(0));
    // the envelope is non-increasing from n0 on
    if fails(n0) {
        let (mut a, mut b) = (n0, n0.max(1));
        while fails(b) {
            a = b;
            b = b.saturating_mul(2);
        }
        while b - a > 1 {
            let m = a + (b - a) / 2;
            if fails(m) {
                a = m;
            } else {
                b = m;
            }
        }
        return (eps, BigInt::from(a));
    }
    const SCAN_CAP: u64 = 1 << 16;
    if n0 > SCAN_CAP {
        return (eps, BigInt::from(n0 - 1));
    }
    let last = (0..n0).rev().find(|&n| fails(n)).unwrap_or(0);
    (eps, BigInt::from(last))
}

/// Least `n0` such that `(n+1)^d q^n` is non-increasing for `n >= n0`.
fn monotone_from(q: &BigRational, d: usize) -> u64 {
    if d == 0 {
        return 0;
    }
    // ((n+2)/(n+1))^d q <= 1
    let ok = |n: u64| {
        let a = BigRational::from_integer(num_traits::pow(BigInt::from(n + 2), d)) * q;
        a <= BigRational::from_integer(num_traits::pow(BigInt::from(n + 1), d))
    };
    let qf = q.to_f64().unwrap_or(0.999_999);
    let guess = if qf > 0.0 && qf < 1.0 { (1.0 / ((1.0 / qf).powf(1.0 / d as f64) - 1.0)).max(0.0) } else { 0.0 };
    let mut n = if guess.is_finite() { (guess as u64).saturating_sub(2) } else { 0 };
    while n > 0 && ok(n - 1) {
        n -= 1;
    }
    while !ok(n) {
        n += 1;
    }
    n
}

/// Is `sum H_i (n+1)^d_i q^n >= 1`? Conservative (true) when undecidable.
fn envelope_at_least_one(terms: &[(BigRational, usize)], q: &BigRational, n: u64) -> bool {
    if n <= 2048 {
        let qn = num_traits::pow(q.clone(), n as usize);
        let s: BigRational = terms
            .iter()
            .map(|(h, d)| h * BigRational::from_integer(num_traits::pow(BigInt::from(n + 1), *d)) * &qn)
            .fold(BigRational::zero(), |a, b| a + b);
        return s >= BigRational::one();
    }
    for prec in [96u32, 256, 1024] {
        let lnq = ln_interval(&Interval::from_rational(q, prec), prec);
        let nn = Interval::from_int(&BigInt::from(n));
        let ln1 = ln_interval(&Interval::from_int(&BigInt::from(n + 1)), prec);
        let mut s = Interval::zero();
        for (h, d) in terms {
            if h.is_zero() {
                continue;
            }
            let e = lnq.mul(&nn, prec).add(&ln1.mul_int(&BigInt::from(*d as u64), prec), prec);
            let e = e.add(&ln_interval(&Interval::from_rational(h, prec), prec), prec);
            s = s.add(&exp_interval(&e, prec), prec);
        }
        if s.hi < Dyadic::one() {
            return false;
        }
        if s.lo >= Dyadic::one() {
            return true;
        }
    }
    true
}

/// Sign of `u_n`: exact below the policy threshold, certified intervals above.
pub fn sign_at(u: &Lrs, ep: &ExpPoly, n: u64, policy: &SignPolicy) -> TermSign {
    if n <= policy.exact_below {
        let t = u.term(n);
        return if t.is_negative() {
            TermSign::Negative
        } else if t.is_zero() {
            TermSign::Zero
        } else {
            TermSign::Nonnegative
        };
    }
    if ep.is_empty() {
        return TermSign::Zero;
    }
    let mut bits = 64u32;
    while bits <= policy.max_precision_bits {
        let v = ep.enclose(n, bits);
        match v.re.sign() {
            Some(s) if s < 0 => return TermSign::Negative,
            Some(s) if s > 0 => return TermSign::Nonnegative,
            _ => {}
        }
        bits *= 2;
    }
    TermSign::Unresolved
}

pub fn round_down_rational(x: &Dyadic) -> BigRational {
    x.round(64, Round::Down).to_rational()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn power_sums_of_golden_ratio() {
        let f = IntPoly::from_i64(&[-1, -1, 1]).to_qpoly();
        let s = power_sums(&f, 6);
        // Lucas numbers
        let want = [2, 1, 3, 4, 7, 11];
        for (a, b) in s.iter().zip(want) {
            assert_eq!(*a, r(b, 1));
        }
    }

    #[test]
    fn tail_examples() {
        let (e, n) = tail_bound_parts(&[(r(1, 2), r(1, 1), 0)]);
        assert_eq!(e, r(1, 4));
        assert_eq!(n, BigInt::zero());
        let (_, n) = tail_bound_parts(&[(r(1, 2), r(100, 1), 0)]);
        assert_eq!(n, BigInt::from(11));
        assert_eq!(tail_bound_parts(&[]), (r(1, 2), BigInt::zero()));
    }

    #[test]
    fn repeated_root_coefficients() {
        let u = Lrs::from_i64(&[10, -25], &[2, 6]).unwrap();
        let ep = exp_poly(&u).unwrap();
        assert_eq!(ep.terms.len(), 1);
        let cp: Vec<_> = ep.terms[0].coeff_poly.iter().map(|c| c.as_rational().unwrap()).collect();
        assert_eq!(cp, vec![r(2, 1), r(-4, 5)]);
    }

    #[test]
    fn fibonacci_binet() {
        let u = Lrs::from_i64(&[1, 1], &[0, 1]).unwrap();
        let ep = exp_poly(&u).unwrap();
        assert_eq!(ep.terms.len(), 2);
        for t in &ep.terms {
            let c = &t.coeff_poly[0];
            // c^2 = 1/5
            assert_eq!(c.mul(c).as_rational(), Some(r(1, 5)));
        }
        let v = ep.enclose(10, 64);
        assert!(v.re.contains(&Dyadic::from_i64(55)));
        assert!(v.im.contains_zero());
        let p = SignPolicy { exact_below: 0, max_precision_bits: 512 };
        assert_eq!(sign_at(&u, &ep, 30, &p), TermSign::Nonnegative);
        let sd = dominance(&ep).unwrap();
        assert!(sd.rho.is_some());
        assert_eq!(sd.residual.len(), 1);
        let stripped = ep.strip_dominant();
        assert_eq!(stripped.terms.len(), 1);
        assert!(stripped.terms[0].root.to_f64().0 < 0.0);
    }

    #[test]
    fn dominance_shapes() {
        let ep = exp_poly(&Lrs::from_i64(&[3, -2], &[1, 3]).unwrap()).unwrap();
        let sd = dominance(&ep).unwrap();
        assert_eq!(sd.rho.as_ref().unwrap().as_rational(), Some(r(2, 1)));
        assert!(sd.dominant_group.is_empty());
        assert_eq!(sd.residual[0].modulus_bound, r(1, 2));
        let ep = exp_poly(&Lrs::from_i64(&[2, -2], &[1, 3]).unwrap()).unwrap();
        assert!(dominance(&ep).unwrap().rho.is_none());
        // 2*5^n - (3+4i)^n - (3-4i)^n: characteristic (x-5)(x^2-6x+25)
        let u = Lrs::from_i64(&[11, -55, 125], &[0, 4, 64]).unwrap();
        assert_eq!(u.term(2), BigInt::from(64));
        let ep = exp_poly(&u).unwrap();
        let sd = dominance(&ep).unwrap();
        assert_eq!(sd.dominant_group.len(), 2);
        assert!(sd.residual.is_empty());
        for e in &sd.dominant_group {
            assert_eq!(e.lambda.compare_modulus(&AlgebraicNumber::one()), Ordering::Equal);
            assert_eq!(e.coeff_poly[0].as_rational(), Some(r(-1, 1)));
        }
        let p = SignPolicy::default();
        assert_eq!(sign_at(&u, &ep, 0, &p), TermSign::Zero);
        let alt = Lrs::from_i64(&[-1], &[1]).unwrap();
        assert_eq!(sign_at(&alt, &exp_poly(&alt).unwrap(), 3, &p), TermSign::Negative);
    }
}
