//! Dense matrices over exact rings: determinants, characteristic polynomials, solves.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Mat<T> = Vec<Vec<T>>;

pub fn identity<T: Zero + One + Clone>(n: usize) -> Mat<T> {
    (0..n).map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect()
}

pub fn mat_mul<T>(a: &Mat<T>, b: &Mat<T>) -> Mat<T>
where
    T: Zero + Clone,
    for<'x> &'x T: Mul<&'x T, Output = T>,
{
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let k = b.len();
    let mut out = vec![vec![T::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            let x = &a[i][l];
            if x.is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] = out[i][j].clone() + x * &b[l][j];
            }
        }
    }
    out
}

pub fn mat_vec<T>(a: &Mat<T>, v: &[T]) -> Vec<T>
where
    T: Zero + Clone,
    for<'x> &'x T: Mul<&'x T, Output = T>,
{
    a.iter().map(|row| row.iter().zip(v).fold(T::zero(), |acc, (x, y)| acc + x * y)).collect()
}

pub fn mat_pow<T>(a: &Mat<T>, mut e: u64) -> Mat<T>
where
    T: Zero + One + Clone,
    for<'x> &'x T: Mul<&'x T, Output = T>,
{
    let mut result = identity(a.len());
    let mut base = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = mat_mul(&result, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mat_mul(&base, &base);
        }
    }
    result
}

pub fn kronecker<T>(a: &Mat<T>, b: &Mat<T>) -> Mat<T>
where
    T: Zero + Clone,
    for<'x> &'x T: Mul<&'x T, Output = T>,
{
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![T::zero(); n * m]; n * m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = &a[i][j] * &b[k][l];
                }
            }
        }
    }
    out
}

/// Coefficients of `det(x I - A)`, lowest degree first (Berkowitz, division free).
pub fn charpoly<T>(a: &Mat<T>) -> Vec<T>
where
    T: Zero + One + Clone + Neg<Output = T> + Add<Output = T> + Sub<Output = T>,
    for<'x> &'x T: Mul<&'x T, Output = T>,
{
    let mut hi_first = berkowitz(a);
    hi_first.reverse();
    hi_first
}

fn berkowitz<T>(m: &Mat<T>) -> Vec<T>
where
    T: Zero + One + Clone + Neg<Output = T> + Add<Output = T> + Sub<Output = T>,
    for<'x> &'x T: Mul<&'x T, Output = T>,
{
    let n = m.len();
    if n == 0 {
        return vec![T::one()];
    }
    let a = m[0][0].clone();
    let r: Vec<T> = m[0][1..].to_vec();
    let c: Vec<T> = m[1..].iter().map(|row| row[0].clone()).collect();
    let sub: Mat<T> = m[1..].iter().map(|row| row[1..].to_vec()).collect();
    let sub_poly = berkowitz(&sub);
    let mut t = vec![T::one(), -a];
    let mut v = c;
    for _ in 0..n.saturating_sub(1) {
        let dot = r.iter().zip(&v).fold(T::zero(), |acc, (x, y)| acc + x * y);
        t.push(-dot);
        v = mat_vec(&sub, &v);
    }
    (0..=n)
        .map(|i| {
            let mut s = T::zero();
            for j in 0..=i.min(n - 1) {
                s = s + &t[i - j] * &sub_poly[j];
            }
            s
        })
        .collect()
}

/// Fraction-free determinant (Bareiss) with row pivoting.
pub fn det_bareiss(a: &Mat<BigInt>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Solve `A x = b` over the rationals; `None` when singular.
pub fn solve_rational(a: &Mat<BigRational>, b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut m: Mat<BigRational> = a.iter().zip(b).map(|(row, bi)| {
        let mut r = row.clone();
        r.push(bi.clone());
        r
    }).collect();
    for col in 0..n {
        let piv = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(piv, col);
        let inv = BigRational::one() / &m[col][col];
        for j in col..=n {
            m[col][j] = &m[col][j] * &inv;
        }
        for i in 0..n {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..=n {
                    let v = &m[col][j] * &f;
                    m[i][j] = &m[i][j] - &v;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

pub fn to_rational(a: &Mat<BigInt>) -> Mat<BigRational> {
    a.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Mat<BigInt> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn charpoly_and_det_agree() {
        let a = m(&[&[2, 1, 0], &[1, 3, -1], &[4, 0, 5]]);
        let cp = charpoly(&a);
        // det(xI - A) at x = 0 is det(-A) = -det(A)
        assert_eq!(cp[0], -det_bareiss(&a));
        assert_eq!(cp[2], BigInt::from(-10));
        assert_eq!(cp[3], BigInt::one());
        let fib = m(&[&[1, 1], &[1, 0]]);
        assert_eq!(charpoly(&fib), vec![BigInt::from(-1), BigInt::from(-1), BigInt::one()]);
    }

    #[test]
    fn det_with_pivot() {
        let a = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(det_bareiss(&a), BigInt::from(-1));
        let a = m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        assert_eq!(det_bareiss(&a), BigInt::from(-3));
    }

    #[test]
    fn solve_small() {
        let a = to_rational(&m(&[&[2, 1], &[1, 3]]));
        let b = vec![BigRational::from_integer(3.into()), BigRational::from_integer(5.into())];
        let x = solve_rational(&a, &b).unwrap();
        assert_eq!(x[0], BigRational::new(4.into(), 5.into()));
        assert_eq!(x[1], BigRational::new(7.into(), 5.into()));
    }

    #[test]
    fn powers() {
        let fib = m(&[&[1, 1], &[1, 0]]);
        assert_eq!(mat_pow(&fib, 10)[0][1], BigInt::from(55));
    }
}
