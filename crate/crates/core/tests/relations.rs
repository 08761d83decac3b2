use lrspos::algebra::algebraic::AlgebraicNumber;
use lrspos::relations::{kronecker_sample, relation_lattice};
use num_rational::BigRational;
use num_traits::One;

type Gauss = (BigRational, BigRational);

fn g(re: (i64, i64), im: (i64, i64)) -> Gauss {
    (BigRational::new(re.0.into(), re.1.into()), BigRational::new(im.0.into(), im.1.into()))
}

fn gmul(a: &Gauss, b: &Gauss) -> Gauss {
    (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

fn gpow(a: &Gauss, e: i64) -> Gauss {
    // unit modulus: the inverse is the conjugate
    let base = if e < 0 { (a.0.clone(), -a.1.clone()) } else { a.clone() };
    (0..e.unsigned_abs()).fold((BigRational::one(), BigRational::from_integer(0.into())), |acc, _| gmul(&acc, &base))
}

fn is_one(ls: &[Gauss], v: &[i64]) -> bool {
    let p = ls.iter().zip(v).fold((BigRational::one(), BigRational::from_integer(0.into())), |acc, (l, &e)| gmul(&acc, &gpow(l, e)));
    p == (BigRational::one(), BigRational::from_integer(0.into()))
}

fn alg(x: &Gauss) -> AlgebraicNumber {
    AlgebraicNumber::gaussian(&x.0, &x.1)
}

fn in_span(basis: &[Vec<i64>], v: &[i64]) -> bool {
    match basis {
        [] => v.iter().all(|&x| x == 0),
        [b] => {
            let i = b.iter().position(|&x| x != 0).unwrap();
            v[i] % b[i] == 0 && v.iter().zip(b).all(|(&x, &y)| x * b[i] == y * v[i])
        }
        _ => true,
    }
}

#[test]
fn bases_verify_and_capture_small_relations() {
    let families = [
        vec![g((3, 5), (4, 5)), g((4, 5), (3, 5))],
        vec![g((3, 5), (4, 5)), g((-3, 5), (4, 5))],
        vec![g((3, 5), (4, 5)), g((5, 13), (12, 13))],
        vec![g((0, 1), (1, 1)), g((3, 5), (4, 5))],
        vec![g((3, 5), (4, 5)), g((3, 5), (-4, 5))],
    ];
    for ls in &families {
        let lambdas: Vec<AlgebraicNumber> = ls.iter().map(alg).collect();
        let basis = relation_lattice(&lambdas, 64, 256);
        assert!(basis.vectors.len() <= 1, "rank {:?}", basis.vectors);
        for v in &basis.vectors {
            assert!(is_one(ls, v), "{v:?}");
        }
        for a in -8i64..=8 {
            for b in -8i64..=8 {
                if is_one(ls, &[a, b]) {
                    assert!(in_span(&basis.vectors, &[a, b]), "{:?} misses ({a}, {b})", basis.vectors);
                }
            }
        }
    }
}

#[test]
fn samples_respect_relations() {
    let ls = [g((3, 5), (4, 5)), g((4, 5), (3, 5))];
    let lambdas: Vec<AlgebraicNumber> = ls.iter().map(alg).collect();
    let basis = relation_lattice(&lambdas, 64, 256);
    assert_eq!(basis.vectors, vec![vec![4, 4]]);
    for s in kronecker_sample(&lambdas, 5000, 64) {
        // (z1 z2)^4 = 1
        let (a, b) = (s.z[0], s.z[1]);
        let mut p = (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
        for _ in 0..2 {
            p = (p.0 * p.0 - p.1 * p.1, 2.0 * p.0 * p.1);
        }
        assert!((p.0 - 1.0).hypot(p.1) <= 64.0 * s.error + 1e-12, "n = {}", s.n);
    }
}
