use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::algebraic::{isolate_roots, totient, AlgebraicNumber};
use crate::algebra::matrix::{charpoly, kronecker, mat_pow, mat_vec, Mat};
use crate::algebra::IntPoly;
use crate::error::{Error, Result};

/// Largest order accepted by the decision engine.
pub const MAX_DECIDABLE_ORDER: usize = 5;

/// Integer linear recurrence `u[n+k] = a1 u[n+k-1] + ... + ak u[n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lrs {
    coeffs: Vec<BigInt>,
    initial: Vec<BigInt>,
}

/// Recurrence with rational data, prior to normalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawLrs {
    pub coeffs: Vec<BigRational>,
    pub initial: Vec<BigRational>,
}

/// `u_n = v^T M^n w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompanionForm {
    pub m: Mat<BigInt>,
    pub v: Vec<BigInt>,
    pub w: Vec<BigInt>,
}

/// Interleaving of non-degenerate subsequences `u[L n + r]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub modulus: u64,
    pub subsequences: Vec<Lrs>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pointwise {
    Sum,
    Product,
    SquareMinusOne,
}

fn check_shape<T: Zero>(coeffs: &[T], initial: &[T]) -> Result<()> {
    if coeffs.is_empty() {
        return Err(Error::InvalidLrs("empty recurrence".into()));
    }
    if coeffs.len() != initial.len() {
        return Err(Error::InvalidLrs(format!(
            "{} coefficients but {} initial terms",
            coeffs.len(),
            initial.len()
        )));
    }
    if coeffs.last().is_some_and(|a| a.is_zero()) {
        return Err(Error::InvalidLrs("last coefficient is zero; order misdeclared".into()));
    }
    Ok(())
}

impl RawLrs {
    pub fn new(coeffs: Vec<BigRational>, initial: Vec<BigRational>) -> Result<Self> {
        check_shape(&coeffs, &initial)?;
        Ok(RawLrs { coeffs, initial })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().chain(&self.initial).all(|q| q.is_integer())
    }

    /// Exact rational term.
    pub fn term(&self, n: u64) -> BigRational {
        let k = self.order();
        if (n as usize) < k {
            return self.initial[n as usize].clone();
        }
        let mut w = self.initial.clone();
        for _ in k as u64..=n {
            let next = (0..k).fold(BigRational::zero(), |acc, i| acc + &self.coeffs[i] * &w[k - 1 - i]);
            w.remove(0);
            w.push(next);
        }
        w[k - 1].clone()
    }
}

/// Integer recurrence with the same term signs: `v_n = D l^(n+1) u_n`.
pub fn validate_and_normalize(raw: &RawLrs) -> Result<Lrs> {
    check_shape(&raw.coeffs, &raw.initial)?;
    if raw.is_integral() {
        return Lrs::new(
            raw.coeffs.iter().map(|q| q.to_integer()).collect(),
            raw.initial.iter().map(|q| q.to_integer()).collect(),
        );
    }
    let l = raw.coeffs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let mut coeffs = Vec::with_capacity(raw.order());
    let mut lp = BigInt::one();
    for a in &raw.coeffs {
        lp *= &l;
        let c = a * BigRational::from_integer(lp.clone());
        debug_assert!(c.is_integer());
        coeffs.push(c.to_integer());
    }
    let mut lp = BigInt::one();
    let scaled: Vec<BigRational> = raw
        .initial
        .iter()
        .map(|u| {
            lp *= &l;
            u * BigRational::from_integer(lp.clone())
        })
        .collect();
    let d = scaled.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let initial = scaled.iter().map(|q| (q * BigRational::from_integer(d.clone())).to_integer()).collect();
    Lrs::new(coeffs, initial)
}

impl Lrs {
    pub fn new(coeffs: Vec<BigInt>, initial: Vec<BigInt>) -> Result<Self> {
        check_shape(&coeffs, &initial)?;
        Ok(Lrs { coeffs, initial })
    }

    pub fn from_i64(coeffs: &[i64], initial: &[i64]) -> Result<Self> {
        Lrs::new(coeffs.iter().map(|&x| x.into()).collect(), initial.iter().map(|&x| x.into()).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn initial(&self) -> &[BigInt] {
        &self.initial
    }

    /// Total bit size of the description.
    pub fn size(&self) -> u64 {
        self.coeffs.iter().chain(&self.initial).map(|x| x.bits() + 1).sum()
    }

    pub fn is_zero_sequence(&self) -> bool {
        self.initial.iter().all(|x| x.is_zero())
    }

    pub fn term(&self, n: u64) -> BigInt {
        let k = self.order();
        if n < k as u64 {
            return self.initial[n as usize].clone();
        }
        if n > 4096 + 64 * k as u64 {
            return self.term_by_matrix(n);
        }
        let mut w = self.initial.clone();
        let mut head = 0usize;
        for _ in k as u64..=n {
            let next = (0..k).fold(BigInt::zero(), |acc, i| acc + &self.coeffs[i] * &w[(head + k - 1 - i) % k]);
            w[head] = next;
            head = (head + 1) % k;
        }
        w[(head + k - 1) % k].clone()
    }

    fn term_by_matrix(&self, n: u64) -> BigInt {
        let c = self.companion();
        let row = {
            let mt = transpose(&c.m);
            let p = mat_pow(&mt, n);
            mat_vec(&p, &c.v)
        };
        row.iter().zip(&c.w).fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
    }

    /// Terms `u_0 .. u_{count-1}`.
    pub fn terms(&self, count: usize) -> Vec<BigInt> {
        let k = self.order();
        let mut out: Vec<BigInt> = self.initial.iter().take(count).cloned().collect();
        while out.len() < count {
            let n = out.len();
            let next = (0..k).fold(BigInt::zero(), |acc, i| acc + &self.coeffs[i] * &out[n - 1 - i]);
            out.push(next);
        }
        out
    }

    pub fn char_poly(&self) -> IntPoly {
        let k = self.order();
        let mut c = vec![BigInt::zero(); k + 1];
        c[k] = BigInt::one();
        for (i, a) in self.coeffs.iter().enumerate() {
            c[k - 1 - i] = -a;
        }
        IntPoly::new(c)
    }

    /// State-transition form on `(u_n, ..., u_{n+k-1})`.
    pub fn companion(&self) -> CompanionForm {
        let k = self.order();
        let mut m = vec![vec![BigInt::zero(); k]; k];
        for i in 0..k - 1 {
            m[i][i + 1] = BigInt::one();
        }
        for j in 0..k {
            m[k - 1][j] = self.coeffs[k - 1 - j].clone();
        }
        let mut v = vec![BigInt::zero(); k];
        v[0] = BigInt::one();
        CompanionForm { m, v, w: self.initial.clone() }
    }

    pub fn pointwise(&self, kind: Pointwise, other: Option<&Lrs>) -> Result<Lrs> {
        match kind {
            Pointwise::Sum => {
                let o = other.ok_or_else(|| Error::Precondition("sum needs two sequences".into()))?;
                let p = self.char_poly().mul(&o.char_poly());
                let k = p.degree();
                let terms: Vec<BigInt> =
                    self.terms(k).into_iter().zip(o.terms(k)).map(|(a, b)| a + b).collect();
                Ok(from_char_poly(&p, terms))
            }
            Pointwise::Product => {
                let o = other.ok_or_else(|| Error::Precondition("product needs two sequences".into()))?;
                let km = kronecker(&self.companion().m, &o.companion().m);
                let p = IntPoly::new(charpoly(&km));
                let k = p.degree();
                let terms: Vec<BigInt> =
                    self.terms(k).into_iter().zip(o.terms(k)).map(|(a, b)| a * b).collect();
                Ok(from_char_poly(&p, terms))
            }
            Pointwise::SquareMinusOne => {
                let k = self.order();
                let bound = k * (k + 1) / 2 + 1;
                let seq: Vec<BigInt> = self.terms(2 * bound).into_iter().map(|x| &x * &x - 1).collect();
                let (coeffs, len) = berlekamp_massey(&seq);
                if len == 0 {
                    return Err(Error::Internal("square of a sequence vanished".into()));
                }
                let ints = rational_coeffs_to_int(&coeffs)?;
                Lrs::new(ints, seq[..len].to_vec())
            }
        }
    }
}

fn transpose(m: &Mat<BigInt>) -> Mat<BigInt> {
    let n = m.len();
    (0..n).map(|i| (0..n).map(|j| m[j][i].clone()).collect()).collect()
}

/// Recurrence with characteristic polynomial `p` (monic) and given first terms.
fn from_char_poly(p: &IntPoly, terms: Vec<BigInt>) -> Lrs {
    let k = p.degree();
    debug_assert!(p.lc().is_one());
    let coeffs = (1..=k).map(|i| -p.coeff(k - i)).collect();
    Lrs { coeffs, initial: terms }
}

fn rational_coeffs_to_int(c: &[BigRational]) -> Result<Vec<BigInt>> {
    c.iter()
        .map(|q| {
            if q.is_integer() {
                Ok(q.to_integer())
            } else {
                Err(Error::Internal("non-integral minimal recurrence".into()))
            }
        })
        .collect()
}

/// Shortest recurrence for `s` over Q; returns `(a1..aL, L)`.
pub fn berlekamp_massey(s: &[BigInt]) -> (Vec<BigRational>, usize) {
    let s: Vec<BigRational> = s.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    // connection polynomial C(x) = 1 - a1 x - ... ; standard formulation
    let mut c = vec![BigRational::one()];
    let mut b = vec![BigRational::one()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut bd = BigRational::one();
    for n in 0..s.len() {
        let mut d = s[n].clone();
        for i in 1..=l {
            if i < c.len() {
                d += &c[i] * &s[n - i];
            }
        }
        if d.is_zero() {
            m += 1;
            continue;
        }
        let coef = &d / &bd;
        let t = c.clone();
        if c.len() < b.len() + m {
            c.resize(b.len() + m, BigRational::zero());
        }
        for (i, bi) in b.iter().enumerate() {
            c[i + m] -= &coef * bi;
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = t;
            bd = d;
            m = 1;
        } else {
            m += 1;
        }
    }
    c.resize(l + 1, BigRational::zero());
    let coeffs = (1..=l).map(|i| -c[i].clone()).collect();
    (coeffs, l)
}

/// Distinct characteristic roots.
pub fn char_roots(u: &Lrs) -> Result<Vec<AlgebraicNumber>> {
    isolate_roots(&u.char_poly())
}

/// Least `n > 0` with `a^n = b^n`, for `a != b` of equal modulus.
pub fn quotient_order(a: &AlgebraicNumber, b: &AlgebraicNumber, degree_bound: u64) -> Option<u64> {
    if a.compare_modulus(b) != std::cmp::Ordering::Equal {
        return None;
    }
    // the quotient has degree at most degree_bound
    let max_n = (1..=2 * degree_bound * degree_bound + 2).filter(|&n| totient(n) <= degree_bound).max()?;
    let bits = 96;
    let (ea, eb) = (a.approx(bits), b.approx(bits));
    let q = ea.div(&eb, 160)?;
    let turns = q.arg(160).and_then(|g| g.div(&crate::numeric::interval::pi(160).scale_pow2(1), 160));
    for n in 1..=max_n {
        if totient(n) > degree_bound {
            continue;
        }
        if let Some(t) = &turns {
            let x = t.mul_int(&BigInt::from(n), 160);
            if x.lo.ceil() > x.hi.floor() {
                continue;
            }
        }
        if a.pow(n).equal(&b.pow(n)) {
            return Some(n);
        }
    }
    None
}

/// Lcm of orders of root-of-unity quotients of distinct roots (1 when none).
pub fn degeneracy_modulus(roots: &[AlgebraicNumber]) -> u64 {
    let mut l = 1u64;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let bound = (roots[i].degree() * roots[j].degree()).min(20) as u64;
            if let Some(n) = quotient_order(&roots[i], &roots[j], bound) {
                l = l.lcm(&n);
            }
        }
    }
    l
}

pub fn is_non_degenerate(u: &Lrs) -> Result<bool> {
    Ok(degeneracy_modulus(&char_roots(u)?) == 1)
}

/// Split into non-degenerate subsequences `u[L n + r]`.
pub fn degenerate_decomposition(u: &Lrs) -> Result<Decomposition> {
    if u.order() > MAX_DECIDABLE_ORDER {
        return Err(Error::OrderTooLarge { order: u.order() });
    }
    let roots = char_roots(u)?;
    let l = degeneracy_modulus(&roots);
    if l == 1 {
        return Ok(Decomposition { modulus: 1, subsequences: vec![u.clone()] });
    }
    if l > 2520 {
        return Err(Error::Internal(format!("degeneracy modulus {l} exceeds 2520")));
    }
    let k = u.order();
    let m = u.companion().m;
    let ml = mat_pow(&m, l);
    let p = IntPoly::new(charpoly(&ml));
    let subsequences: Vec<Lrs> = (0..l)
        .map(|r| {
            let terms = (0..k as u64).map(|n| u.term(l * n + r)).collect();
            from_char_poly(&p, terms)
        })
        .collect();
    // roots of the subsequences are the L-th powers; re-test once
    let sub_roots = char_roots(&subsequences[0])?;
    if degeneracy_modulus(&sub_roots) != 1 {
        return Err(Error::Internal("subsequence still degenerate".into()));
    }
    Ok(Decomposition { modulus: l, subsequences })
}

impl Decomposition {
    pub fn term(&self, n: u64) -> BigInt {
        let l = self.modulus;
        self.subsequences[(n % l) as usize].term(n / l)
    }
}

/// Sign of the `n`-th term.
pub fn term_sign(u: &Lrs, n: u64) -> i32 {
    let t = u.term(n);
    if t.is_positive() {
        1
    } else if t.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib() -> Lrs {
        Lrs::from_i64(&[1, 1], &[0, 1]).unwrap()
    }

    #[test]
    fn terms_and_matrix() {
        assert_eq!(fib().term(10), BigInt::from(55));
        let u = Lrs::from_i64(&[10, -25], &[2, 6]).unwrap();
        assert_eq!(u.term(3), BigInt::from(-50));
        assert_eq!(fib().term(1), BigInt::one());
        assert_eq!(fib().char_poly(), IntPoly::from_i64(&[-1, -1, 1]));
        let big = fib().term(5000);
        assert_eq!(big, fib().terms(5001)[5000]);
        assert_eq!(fib().term_by_matrix(37), fib().term(37));
    }

    #[test]
    fn berlekamp_massey_recovers_fibonacci() {
        let (c, l) = berlekamp_massey(&fib().terms(10));
        assert_eq!(l, 2);
        assert_eq!(c, vec![BigRational::one(), BigRational::one()]);
    }

    #[test]
    fn validation_rejects() {
        assert!(Lrs::from_i64(&[1, 0], &[1, 1]).is_err());
        assert!(Lrs::from_i64(&[], &[]).is_err());
        assert!(Lrs::from_i64(&[1], &[1, 2]).is_err());
    }

    #[test]
    fn decomposition_examples() {
        let d = degenerate_decomposition(&fib()).unwrap();
        assert_eq!(d.modulus, 1);
        let d = degenerate_decomposition(&Lrs::from_i64(&[0, 1], &[3, -4]).unwrap()).unwrap();
        assert_eq!(d.modulus, 2);
        assert_eq!(d.subsequences[1].term(7), BigInt::from(-4));
        let u = Lrs::from_i64(&[2, -2], &[1, 3]).unwrap();
        let d = degenerate_decomposition(&u).unwrap();
        assert_eq!(d.modulus, 4);
        for n in 0..60 {
            assert_eq!(d.term(n), u.term(n));
        }
    }
}
