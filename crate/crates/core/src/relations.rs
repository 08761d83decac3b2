//! Multiplicative relations among unit-modulus algebraic numbers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::algebraic::AlgebraicNumber;
use crate::algebra::lll::{echelon_basis, lll};
use crate::numeric::interval::pi;
use crate::numeric::{Dyadic, Interval};

pub const DEFAULT_SEARCH_BOUND: i64 = 64;
pub const DEFAULT_PRECISION_BITS: u32 = 256;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationBasis {
    pub m: usize,
    pub vectors: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Torus {
    pub m: usize,
    pub relations: Vec<Vec<i64>>,
}

/// Floating approximation of a torus point with an error bound on each coordinate.
#[derive(Clone, Debug)]
pub struct SamplePoint {
    pub n: u64,
    pub z: Vec<(f64, f64)>,
    pub error: f64,
}

/// `prod lambda_i^(v_i) = 1`, decided exactly.
pub fn monomial_is_one(lambdas: &[AlgebraicNumber], v: &[i64]) -> bool {
    let side = |sign: i64| -> AlgebraicNumber {
        let mut acc = AlgebraicNumber::one();
        for (l, &e) in lambdas.iter().zip(v) {
            if e != 0 && e.signum() == sign {
                acc = acc.mul(&l.pow(e.unsigned_abs()));
            }
        }
        acc
    };
    side(1).equal(&side(-1))
}

fn turns(l: &AlgebraicNumber, prec: u32) -> Option<Interval> {
    let b = l.approx(prec as i64);
    let arg = b.arg(prec + 32)?;
    arg.div(&pi(prec + 32).scale_pow2(1), prec + 32)
}

/// Could `sum v_i t_i` be an integer?
fn near_integer(t: &[Interval], v: &[i64], prec: u32) -> bool {
    let mut s = Interval::zero();
    for (ti, &vi) in t.iter().zip(v) {
        s = s.add(&ti.mul_int(&BigInt::from(vi), prec), prec);
    }
    s.lo.ceil() <= s.hi.floor()
}

fn normalize_sign(v: &mut [i64]) {
    if let Some(&f) = v.iter().find(|&&x| x != 0) {
        if f < 0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

fn gcd_vec(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Candidate relations from lattice reduction on argument approximations.
fn lll_candidates(t: &[Interval], prec: u32) -> Vec<Vec<i64>> {
    let m = t.len();
    let scale = Dyadic::new(BigInt::one(), (prec / 2) as i64);
    let mut basis: Vec<Vec<BigInt>> = vec![];
    for i in 0..=m {
        let mut row = vec![BigInt::zero(); m + 2];
        row[i] = BigInt::one();
        let val = if i < m { t[i].mid().mul(&scale) } else { scale.clone() };
        row[m + 1] = val.floor();
        basis.push(row);
    }
    lll(&mut basis);
    basis
        .iter()
        .filter_map(|r| r[..m].iter().map(|x| x.to_i64()).collect::<Option<Vec<i64>>>())
        .filter(|v| v.iter().any(|&x| x != 0))
        .collect()
}

/// Generators of the relation group of `lambdas` (each of modulus one).
pub fn relation_lattice(lambdas: &[AlgebraicNumber], search_bound: i64, precision_bits: u32) -> RelationBasis {
    let m = lambdas.len();
    if m == 0 {
        return RelationBasis { m, vectors: vec![] };
    }
    let prec = precision_bits.max(64);
    let t: Vec<Option<Interval>> = lambdas.iter().map(|l| turns(l, prec)).collect();
    let mut found: Vec<Vec<i64>> = vec![];
    let try_vec = |v: Vec<i64>, found: &mut Vec<Vec<i64>>| {
        let mut v = v;
        normalize_sign(&mut v);
        if v.iter().all(|&x| x == 0) || found.iter().any(|w| is_multiple_of(&v, w)) {
            return;
        }
        let numeric_ok = match t.iter().cloned().collect::<Option<Vec<Interval>>>() {
            Some(ts) => near_integer(&ts, &v, prec),
            None => true,
        };
        if numeric_ok && monomial_is_one(lambdas, &v) {
            found.push(v);
        }
    };
    if let Some(ts) = t.iter().cloned().collect::<Option<Vec<Interval>>>() {
        for v in lll_candidates(&ts, prec) {
            try_vec(v.clone(), &mut found);
            let g = gcd_vec(&v);
            if g > 1 {
                try_vec(v.iter().map(|x| x / g).collect(), &mut found);
            }
        }
    }
    if m <= 2 {
        let b = search_bound.max(1);
        let mut v = vec![0i64; m];
        let ranges: Vec<(i64, i64)> = (0..m).map(|i| if i == 0 { (0, b) } else { (-b, b) }).collect();
        exhaustive(&ranges, &mut v, 0, &mut |w| try_vec(w.to_vec(), &mut found));
    }
    RelationBasis { m, vectors: reduce_basis(lambdas, &found) }
}

/// `v = k w` for some integer `k`.
fn is_multiple_of(v: &[i64], w: &[i64]) -> bool {
    let Some(i) = w.iter().position(|&x| x != 0) else { return false };
    if v[i] % w[i] != 0 {
        return false;
    }
    let k = v[i] / w[i];
    v.iter().zip(w).all(|(a, b)| *a == k * b)
}

fn exhaustive(ranges: &[(i64, i64)], v: &mut Vec<i64>, i: usize, f: &mut dyn FnMut(&[i64])) {
    if i == ranges.len() {
        f(v);
        return;
    }
    for x in ranges[i].0..=ranges[i].1 {
        v[i] = x;
        exhaustive(ranges, v, i + 1, f);
    }
}

/// Independent generators of the group generated by `found`, completed by
/// dividing out torsion where the quotient vector is itself a relation.
fn reduce_basis(lambdas: &[AlgebraicNumber], found: &[Vec<i64>]) -> Vec<Vec<i64>> {
    if found.is_empty() {
        return vec![];
    }
    let big: Vec<Vec<BigInt>> = found.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut basis: Vec<Vec<i64>> =
        echelon_basis(&big).into_iter().map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect()).collect();
    if basis.len() == 1 {
        // rank one: the group is generated by the least relation multiple of the primitive direction
        let v = &basis[0];
        let g = gcd_vec(v);
        let w: Vec<i64> = v.iter().map(|x| x / g).collect();
        for d in (1..=g).filter(|d| g % d == 0) {
            let cand: Vec<i64> = w.iter().map(|x| x * d).collect();
            if monomial_is_one(lambdas, &cand) {
                basis = vec![cand];
                break;
            }
        }
    }
    if basis.len() > 1 && basis.len() == lambdas.len() && lambdas.len() <= 2 {
        basis = full_rank_basis(lambdas);
    }
    let mut big: Vec<Vec<BigInt>> = basis.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
    if big.len() > 1 {
        lll(&mut big);
    }
    let mut out: Vec<Vec<i64>> = big.into_iter().map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect()).collect();
    out.iter_mut().for_each(|v| normalize_sign(v));
    out
}

/// All relations when every `lambda_i` is a root of unity (m <= 2).
fn full_rank_basis(lambdas: &[AlgebraicNumber]) -> Vec<Vec<i64>> {
    let orders: Vec<i64> = lambdas.iter().map(|l| l.is_root_of_unity().unwrap_or(1) as i64).collect();
    let m = lambdas.len();
    let mut gens: Vec<Vec<BigInt>> = vec![];
    for i in 0..m {
        let mut e = vec![BigInt::zero(); m];
        e[i] = BigInt::from(orders[i]);
        gens.push(e);
    }
    if m == 2 {
        for a in 0..orders[0] {
            for b in 0..orders[1] {
                if (a, b) != (0, 0) && monomial_is_one(lambdas, &[a, b]) {
                    gens.push(vec![BigInt::from(a), BigInt::from(b)]);
                }
            }
        }
    }
    echelon_basis(&gens).into_iter().map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect()).collect()
}

pub fn torus_of(basis: &RelationBasis) -> Torus {
    Torus { m: basis.m, relations: basis.vectors.clone() }
}

impl Torus {
    /// Exact membership for algebraic points.
    pub fn contains(&self, z: &[AlgebraicNumber]) -> bool {
        if z.len() != self.m {
            return false;
        }
        let one = AlgebraicNumber::one();
        if z.iter().any(|x| x.compare_modulus(&one) != std::cmp::Ordering::Equal) {
            return false;
        }
        self.relations.iter().all(|v| monomial_is_one(z, v))
    }

    pub fn dimension(&self) -> usize {
        self.m - self.relations.len()
    }
}

/// Approximate `(lambda_1^n, ..., lambda_m^n)` for `1 <= n <= n_max`.
pub fn kronecker_sample(lambdas: &[AlgebraicNumber], n_max: u64, precision_bits: u32) -> Vec<SamplePoint> {
    let prec = precision_bits.max(64);
    let extra = 64 - n_max.max(1).leading_zeros();
    let boxes: Vec<_> = lambdas.iter().map(|l| l.approx((prec + extra + 8) as i64)).collect();
    let mut cur = boxes.clone();
    let mut out = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        if n > 1 {
            for (c, b) in cur.iter_mut().zip(&boxes) {
                // box products wrap, so re-seed by binary powering
                *c = if n % 32 == 0 { b.pow(n, prec + extra + 16) } else { c.mul(b, prec + extra + 16) };
            }
        }
        let z = cur.iter().map(|c| c.to_f64()).collect();
        let err = cur.iter().map(|c| c.radius().to_f64()).fold(0.0f64, f64::max) + 4.0 * f64::EPSILON;
        out.push(SamplePoint { n, z, error: err });
    }
    out
}

/// Is the relation vector entrywise bounded by `b`?
pub fn within_bound(v: &[i64], b: i64) -> bool {
    v.iter().all(|x| x.abs() <= b)
}

pub fn to_bigint_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn has_negative(v: &[BigInt]) -> bool {
    v.iter().any(|x| x.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn g(a: i64, b: i64, d: i64) -> AlgebraicNumber {
        AlgebraicNumber::gaussian(&BigRational::new(a.into(), d.into()), &BigRational::new(b.into(), d.into()))
    }

    #[test]
    fn lattice_examples() {
        let l1 = g(3, 4, 5);
        let l2 = g(4, 3, 5);
        let b = relation_lattice(&[l1.clone(), l2.clone()], 16, 256);
        assert_eq!(b.vectors, vec![vec![4, 4]]);
        assert!(relation_lattice(std::slice::from_ref(&l1), 16, 256).vectors.is_empty());
        let b = relation_lattice(&[l1.clone(), l1.clone()], 16, 256);
        assert_eq!(b.vectors, vec![vec![1, -1]]);
    }

    #[test]
    fn torus_membership() {
        let i = AlgebraicNumber::i();
        let full = torus_of(&RelationBasis { m: 2, vectors: vec![] });
        assert!(full.contains(&[i.clone(), AlgebraicNumber::from_i64(-1)]));
        let diag = torus_of(&RelationBasis { m: 2, vectors: vec![vec![1, -1]] });
        assert!(diag.contains(&[i.clone(), i.clone()]));
        assert!(!diag.contains(&[i.clone(), i.conj()]));
        let t = torus_of(&RelationBasis { m: 2, vectors: vec![vec![4, 4]] });
        assert!(t.contains(&[g(3, 4, 5), g(4, 3, 5)]));
    }

    #[test]
    fn sampling() {
        let s = kronecker_sample(&[AlgebraicNumber::i()], 4, 64);
        let want = [(0.0, 1.0), (-1.0, 0.0), (0.0, -1.0), (1.0, 0.0)];
        for (p, w) in s.iter().zip(want) {
            assert!((p.z[0].0 - w.0).abs() < 1e-12 && (p.z[0].1 - w.1).abs() < 1e-12);
        }
    }
}
