use lrspos::hardness::{cf_oracle, circle_point, default_grid, hardness_lrs, lagrange_bracket, w_term};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    /// With `p = a/D`, `q = b/D`, the scaled sequence `D^n u_n` satisfies the
    /// integer recurrence with coefficients `a_i D^i`.
    #[test]
    fn recurrence_matches_closed_form(sn in 1i64..=12, sd in 1i64..=12, rn in 1i64..=20, rd in 1i64..=5) {
        prop_assume!(sn != sd);
        let point = circle_point(&rat(sn, sd)).unwrap();
        let pair = hardness_lrs(&point, &rat(rn, rd)).unwrap();
        prop_assert_eq!(&pair.u.coeffs, &pair.v.coeffs);
        let d = point.p.denom().lcm(point.q.denom());
        let scale = |x: &BigRational, k: &BigInt| {
            let y = x * BigRational::from_integer(k.clone());
            assert!(y.is_integer());
            y.to_integer()
        };
        let (a, b) = (scale(&point.p, &d), scale(&point.q, &d));
        let coeffs: Vec<BigInt> = (0..6).map(|i| scale(&pair.u.coeffs[i], &d.pow(i as u32 + 1))).collect();
        let rd_big = BigInt::from(rd);
        // closed forms scaled by rd D^n
        let (mut re, mut im, mut dn) = (BigInt::one(), BigInt::zero(), BigInt::one());
        let (mut xu, mut xv): (Vec<BigInt>, Vec<BigInt>) = (vec![], vec![]);
        for n in 0..=1000usize {
            let damp = BigInt::from(n) * (&dn - &re) * &rd_big;
            let (cu, cv) = (BigInt::from(rn) * &im - &damp, -(BigInt::from(rn) * &im) - &damp);
            let (nu, nv) = if n < 6 {
                let k = &dn * &rd_big;
                (scale(&pair.u.initial[n], &k), scale(&pair.v.initial[n], &k))
            } else {
                (
                    (0..6).fold(BigInt::zero(), |s, i| s + &coeffs[i] * &xu[n - 1 - i]),
                    (0..6).fold(BigInt::zero(), |s, i| s + &coeffs[i] * &xv[n - 1 - i]),
                )
            };
            prop_assert_eq!(&nu, &cu);
            prop_assert_eq!(&nv, &cv);
            xu.push(nu);
            xv.push(nv);
            (re, im) = (&re * &a - &im * &b, &re * &b + &im * &a);
            dn *= &d;
        }
    }
}

#[test]
fn circle_points_have_degree_two_and_infinite_order() {
    for s in [rat(1, 2), rat(1, 3), rat(2, 3), rat(3, 7)] {
        let a = circle_point(&s).unwrap().algebraic();
        assert_eq!(a.degree(), 2);
        assert_eq!(a.is_root_of_unity(), None);
    }
}

#[test]
fn positive_terms_satisfy_the_small_distance_inequality() {
    let point = circle_point(&rat(1, 2)).unwrap();
    let r = rat(1, 1);
    let pair = hardness_lrs(&point, &r).unwrap();
    let theta = 0.8f64.atan2(0.6);
    // 5^m w_m = |Im (3+4i)^m| - m (5^m - Re (3+4i)^m)
    let (mut a, mut b, mut f) = (BigInt::one(), BigInt::zero(), BigInt::one());
    let mut positives = 0;
    for m in 1..20_000u64 {
        (a, b) = (&a * 3 - &b * 4, &a * 4 + &b * 3);
        f *= 5;
        let w = b.abs() - BigInt::from(m) * (&f - &a);
        if m % 997 == 0 {
            assert_eq!(w_term(&pair, m) > BigRational::zero(), w.is_positive());
        }
        if m >= 401 && w.is_positive() {
            positives += 1;
            let x = (m as f64 * theta).rem_euclid(std::f64::consts::TAU);
            let d = x.min(std::f64::consts::TAU - x);
            assert!(m as f64 * d < 2.0 / 0.9, "m = {m}");
        }
    }
    assert!(positives > 0);
}

#[test]
fn bracket_contains_oracle_on_several_points() {
    for s in [rat(1, 2), rat(1, 3), rat(2, 7)] {
        let point = circle_point(&s).unwrap();
        let b = lagrange_bracket(&point, &default_grid(100), &rat(1, 10), 30_000).unwrap();
        let o = cf_oracle(&point, b.n, 30_000, 192).unwrap();
        let upper = b.upper.unwrap_or(f64::INFINITY);
        assert!(b.lower <= o.value + o.error && o.value - o.error <= upper, "{s}: [{}, {upper}] vs {}", b.lower, o.value);
    }
}
