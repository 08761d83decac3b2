use lrspos::algebra::algebraic::{alg_arith, isolate_roots, AlgebraicNumber, ArithOp};
use lrspos::algebra::poly::{mignotte_gap, IntPoly};
use lrspos::numeric::{CBox, Interval};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn poly(c: &[i64]) -> IntPoly {
    IntPoly::from_i64(c)
}

fn nonzero_lead(mut c: Vec<i64>) -> Vec<i64> {
    if *c.last().unwrap() == 0 {
        *c.last_mut().unwrap() = 1;
    }
    c
}

fn box_distance_lo(a: &CBox, b: &CBox) -> f64 {
    let gap = |x: &Interval, y: &Interval| (y.lo.to_f64() - x.hi.to_f64()).max(x.lo.to_f64() - y.hi.to_f64()).max(0.0);
    gap(&a.re, &b.re).hypot(gap(&a.im, &b.im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn isolation_is_complete(c in prop::collection::vec(-100i64..=100, 2..=11)) {
        let p = poly(&nonzero_lead(c));
        let roots = isolate_roots(&p).unwrap();
        prop_assert_eq!(roots.len(), p.squarefree().degree());
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                prop_assert!(!roots[i].enclosure().intersects(&roots[j].enclosure()));
            }
        }
    }

    #[test]
    fn separation_is_sound(c in prop::collection::vec(-20i64..=20, 3..=8)) {
        let p = poly(&nonzero_lead(c));
        let sf = p.squarefree();
        prop_assume!(sf.degree() >= 2);
        let gap = mignotte_gap(&sf).unwrap();
        let g = num_traits::ToPrimitive::to_f64(&gap).unwrap();
        let roots = isolate_roots(&sf).unwrap();
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                let (a, b) = (roots[i].approx(120), roots[j].approx(120));
                prop_assert!(box_distance_lo(&a, &b) >= g * (1.0 - 1e-9));
            }
        }
    }

    #[test]
    fn arithmetic_is_sound(a in (-6i64..=6, -6i64..=6), b in (-6i64..=6, -6i64..=6), pick in 0usize..2) {
        // roots of x^2 + a1 x + a0
        let ra = isolate_roots(&poly(&[a.1, a.0, 1])).unwrap();
        let rb = isolate_roots(&poly(&[b.1, b.0, 1])).unwrap();
        let (x, y) = (&ra[pick % ra.len()], &rb[pick % rb.len()]);
        for op in [ArithOp::Add, ArithOp::Mul] {
            let z = alg_arith(op, x, Some(y)).unwrap();
            let v = z.poly().eval_cbox(&z.approx(200), 200);
            prop_assert!(v.contains_zero());
        }
    }

    #[test]
    fn sign_trichotomy(n in -50i64..=50, d in 1i64..=20, k in 2i64..=30) {
        // n/d + sqrt(k)
        let s = isolate_roots(&poly(&[-k, 0, 1])).unwrap().into_iter().find(|r| r.to_f64().0 > 0.0).unwrap();
        let x = s.add_rational(&BigRational::new(n.into(), d.into()));
        prop_assert_eq!(x.sign().unwrap(), -x.neg().sign().unwrap());
        prop_assert!(x.mul(&x).sign().unwrap() >= 0);
    }
}

/// `x^n - 1` divided by every `x^d - 1`, `d | n`, `d < n`, gives the cyclotomic polynomial.
fn cyclotomic(n: u64) -> IntPoly {
    let mut p = IntPoly::monomial(BigInt::from(1), n as usize).sub(&IntPoly::one());
    for d in 1..n {
        if n % d == 0 {
            p = p.div_exact(&cyclotomic(d)).unwrap();
        }
    }
    p
}

#[test]
fn roots_of_unity_match_cyclotomic_divisibility() {
    let probes = [
        AlgebraicNumber::i(),
        AlgebraicNumber::gaussian(&BigRational::new(3.into(), 5.into()), &BigRational::new(4.into(), 5.into())),
        AlgebraicNumber::from_i64(-1),
    ];
    let mut extra: Vec<AlgebraicNumber> = vec![];
    for n in [3u64, 5, 8, 12] {
        extra.extend(isolate_roots(&cyclotomic(n)).unwrap());
    }
    for z in probes.iter().chain(&extra) {
        let order = z.is_root_of_unity();
        for n in 1..=66u64 {
            let divides = cyclotomic(n).div_exact(z.poly()).is_some();
            assert_eq!(divides, order == Some(n), "{:?} at n = {n}", z.to_f64());
        }
    }
}
