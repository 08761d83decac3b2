//! Exact LLL reduction for small integer lattices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

fn to_q(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

fn gram_schmidt(b: &[Vec<BigInt>]) -> (Vec<Vec<BigRational>>, Vec<Vec<BigRational>>, Vec<BigRational>) {
    let n = b.len();
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut norms = Vec::with_capacity(n);
    for i in 0..n {
        let bi = to_q(&b[i]);
        let mut v = bi.clone();
        for j in 0..i {
            if norms[j] == BigRational::zero() {
                continue;
            }
            mu[i][j] = dot(&bi, &star[j]) / &norms[j];
            for (x, s) in v.iter_mut().zip(&star[j]) {
                *x -= &mu[i][j] * s;
            }
        }
        norms.push(dot(&v, &v));
        star.push(v);
    }
    (star, mu, norms)
}

fn round(q: &BigRational) -> BigInt {
    let two = BigInt::from(2);
    let n = q.numer() * &two + q.denom();
    num_integer::Integer::div_floor(&n, &(q.denom() * two))
}

/// LLL-reduce the rows of `basis` in place (delta = 3/4).
pub fn lll(basis: &mut Vec<Vec<BigInt>>) {
    let n = basis.len();
    if n < 2 {
        return;
    }
    let delta = BigRational::new(3.into(), 4.into());
    let mut k = 1;
    let mut guard = 0u64;
    while k < n {
        guard += 1;
        if guard > 1_000_000 {
            break;
        }
        for j in (0..k).rev() {
            let (_, mu, _) = gram_schmidt(basis);
            let r = round(&mu[k][j]);
            if !r.is_zero() {
                let bj = basis[j].clone();
                for (x, y) in basis[k].iter_mut().zip(&bj) {
                    *x -= &r * y;
                }
            }
        }
        let (_, mu, norms) = gram_schmidt(basis);
        let lhs = &norms[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if lhs >= &rhs {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
}

/// Squared Euclidean length.
pub fn norm2(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x * x).sum()
}

/// Hermite-style echelon basis of the lattice spanned by `vs` (rows, nonzero).
pub fn echelon_basis(vs: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    if vs.is_empty() {
        return vec![];
    }
    let m = vs[0].len();
    let mut rows: Vec<Vec<BigInt>> = vs.iter().filter(|v| v.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut out = vec![];
    for col in 0..m {
        // Euclid on column `col` among remaining rows
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][col].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| rows[i][col].abs()).unwrap();
            let pv = rows[p].clone();
            for &i in &nz {
                if i == p {
                    continue;
                }
                let q = num_integer::Integer::div_floor(&rows[i][col], &pv[col]);
                for (x, y) in rows[i].iter_mut().zip(&pv) {
                    *x -= &q * y;
                }
            }
        }
        if let Some(p) = (0..rows.len()).find(|&i| !rows[i][col].is_zero()) {
            let mut r = rows.remove(p);
            if r[col].is_negative() {
                r.iter_mut().for_each(|x| *x = -x.clone());
            }
            out.push(r);
        }
        rows.retain(|v| v.iter().any(|x| !x.is_zero()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_relation_of_golden_ratio() {
        // phi^2 - phi - 1 = 0 from a scaled approximation
        let scale = 1u64 << 40;
        let phi = ((1.0 + 5f64.sqrt()) / 2.0) * scale as f64;
        let phi2 = ((3.0 + 5f64.sqrt()) / 2.0) * scale as f64;
        let mut b = vec![
            vec![BigInt::from(1), BigInt::from(0), BigInt::from(0), BigInt::from(scale)],
            vec![BigInt::from(0), BigInt::from(1), BigInt::from(0), BigInt::from(phi as u64)],
            vec![BigInt::from(0), BigInt::from(0), BigInt::from(1), BigInt::from(phi2 as u64)],
        ];
        lll(&mut b);
        let v = &b[0];
        let c: Vec<i64> = v[..3].iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert!(c == vec![1, 1, -1] || c == vec![-1, -1, 1], "{c:?}");
    }

    #[test]
    fn echelon() {
        let v = |a: i64, b: i64| vec![BigInt::from(a), BigInt::from(b)];
        let e = echelon_basis(&[v(8, 8), v(4, 4), v(12, 12)]);
        assert_eq!(e, vec![v(4, 4)]);
        let e = echelon_basis(&[v(2, 0), v(0, 3), v(1, 1)]);
        assert_eq!(e.len(), 2);
        assert_eq!(e[0], v(1, 1));
    }
}
