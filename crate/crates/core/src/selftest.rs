//! Reduced-size versions of the acceptance checks, runnable from the binary.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::algebraic::{isolate_roots, AlgebraicNumber};
use crate::algebra::poly::{mignotte_gap, IntPoly};
use crate::decide::{decide_positivity, decide_ultimate, degree_factor, replay, torus_min_sign, Config, TorusSign, VerdictKind};
use crate::decide::torus::{grid_minimum, grid_resolution};
use crate::hardness::{cf_oracle_interval, circle_point, closed_form, golden_turn, hardness_lrs};
use crate::lrs::{degenerate_decomposition, Lrs};
use crate::relations::{kronecker_sample, RelationBasis};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

fn random_lrs(rng: &mut ChaCha8Rng) -> Lrs {
    let k = rng.gen_range(1..=5usize);
    let mut c: Vec<i64> = (0..k).map(|_| rng.gen_range(-9..=9)).collect();
    while c[k - 1] == 0 {
        c[k - 1] = rng.gen_range(-9..=9);
    }
    let init: Vec<i64> = (0..k).map(|_| rng.gen_range(-9..=9)).collect();
    Lrs::from_i64(&c, &init).expect("valid shape")
}

fn first_negative(u: &Lrs, upto: usize) -> Option<usize> {
    u.terms(upto).iter().position(|x| x.is_negative())
}

fn oracle_equivalence(count: usize, cutoff: u64) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let cfg = Config { prefix_cutoff: cutoff, ..Config::default() };
    let mut bad = 0;
    for _ in 0..count {
        let u = random_lrs(&mut rng);
        let neg = first_negative(&u, cutoff as usize);
        match decide_positivity(&u, &cfg) {
            Ok(v) => {
                let ok = match v.kind {
                    VerdictKind::Positive => neg.is_none(),
                    VerdictKind::NotPositive => v.witness_verifies() && neg.is_some(),
                    _ => true,
                };
                bad += usize::from(!ok);
            }
            Err(_) => bad += 1,
        }
    }
    (bad == 0, format!("{count} instances, {bad} contradictions"))
}

fn ultimate_totality(count: usize, cutoff: u64) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(2025);
    let cfg = Config { prefix_cutoff: cutoff, ..Config::default() };
    let (mut unresolved, mut inconsistent) = (0, 0);
    let low = cutoff as usize / 10;
    for _ in 0..count {
        let u = random_lrs(&mut rng);
        let Ok(v) = decide_ultimate(&u, &cfg) else {
            unresolved += 1;
            continue;
        };
        match v.kind {
            VerdictKind::Unresolved => unresolved += 1,
            VerdictKind::UltimatelyPositive => {
                let t = v.threshold.as_ref().map(|t| t.value().clone()).unwrap_or_default();
                let terms = u.terms(cutoff as usize);
                let late_neg = terms.iter().enumerate().skip(low).any(|(n, x)| x.is_negative() && BigInt::from(n) >= t);
                inconsistent += usize::from(late_neg);
            }
            _ => {}
        }
    }
    (unresolved == 0 && inconsistent == 0, format!("{count} instances, {unresolved} unresolved, {inconsistent} inconsistent"))
}

fn critical_case() -> (bool, String) {
    let u = Lrs::from_i64(&[11, -55, 125], &[0, 4, 64]).expect("valid");
    let cfg = Config::default();
    let ult = decide_ultimate(&u, &cfg);
    let pos = decide_positivity(&u, &cfg);
    match (ult, pos) {
        (Ok(a), Ok(b)) => {
            let critical = serde_json::to_string(&a.trace).unwrap_or_default().contains("\"critical\":true");
            let ok = a.kind == VerdictKind::UltimatelyPositive && critical && b.kind == VerdictKind::Positive;
            (ok, format!("ultimate {}, critical branch {critical}, positivity {}", a.kind.as_str(), b.kind.as_str()))
        }
        (a, b) => (false, format!("errors: {:?} {:?}", a.err(), b.err())),
    }
}

fn gaussian(re: (i64, i64), im: (i64, i64)) -> AlgebraicNumber {
    AlgebraicNumber::gaussian(&BigRational::new(re.0.into(), re.1.into()), &BigRational::new(im.0.into(), im.1.into()))
}

fn torus_agreement(points: u64) -> (bool, String) {
    let one = AlgebraicNumber::one();
    let rank1 = RelationBasis { m: 2, vectors: vec![vec![4, 4]] };
    let rank0 = RelationBasis { m: 2, vectors: vec![] };
    let mut cases = vec![];
    for a in [3, 4, 5, 6] {
        cases.push((AlgebraicNumber::from_i64(a), one.clone(), one.clone(), rank1.clone()));
    }
    cases.push((AlgebraicNumber::from_i64(4), one.clone(), one.clone(), rank0.clone()));
    cases.push((AlgebraicNumber::from_i64(3), one.clone(), gaussian((1, 2), (1, 2)), rank0));
    let mut bad = 0;
    for (a, c1, c2, basis) in &cases {
        let Ok(sign) = torus_min_sign(a, c1, c2, basis) else {
            bad += 1;
            continue;
        };
        let af = a.to_f64().0;
        let m = grid_minimum(af, c1.to_f64(), c2.to_f64(), basis, points);
        let res = grid_resolution(c1.to_f64(), c2.to_f64(), basis, points);
        let ok = match sign {
            TorusSign::Positive => m > -res,
            TorusSign::Zero => m.abs() <= res,
            TorusSign::Negative => m < res,
            TorusSign::Undetermined => false,
        };
        bad += usize::from(!ok);
    }
    (bad == 0, format!("{} instances, {bad} disagreements", cases.len()))
}

fn kronecker(n_max: u64, tol: f64) -> (bool, String) {
    let lambdas = [gaussian((3, 5), (4, 5)), gaussian((4, 5), (3, 5))];
    let exact = -1.0;
    let min = kronecker_sample(&lambdas, n_max, 64)
        .iter()
        .map(|s| 3.0 + 2.0 * s.z[0].0 + 2.0 * s.z[1].0)
        .fold(f64::INFINITY, f64::min);
    (min > exact && min - exact < tol, format!("empirical {min:.5} vs exact {exact}"))
}

fn mignotte(count: usize) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut violations = 0;
    let mut pairs = 0;
    for _ in 0..count {
        let d = rng.gen_range(2..=8usize);
        let mut c: Vec<i64> = (0..=d).map(|_| rng.gen_range(-9..=9)).collect();
        if c[d] == 0 {
            c[d] = 1;
        }
        let p = IntPoly::from_i64(&c);
        let (Ok(gap), Ok(roots)) = (mignotte_gap(&p), isolate_roots(&p)) else { continue };
        let g = gap.to_f64().unwrap_or(0.0);
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                let (a, b) = (roots[i].to_f64(), roots[j].to_f64());
                pairs += 1;
                violations += usize::from((a.0 - b.0).hypot(a.1 - b.1) <= g);
            }
        }
    }
    (violations == 0, format!("{pairs} root pairs, {violations} violations"))
}

fn baker() -> (bool, String) {
    let f = degree_factor(2);
    let expected = BigInt::from(192u32).pow(10);
    let lambda = gaussian((3, 5), (4, 5));
    let c = gaussian((1, 2), (1, 3));
    let mono = (1..40u64).all(|n| {
        match (crate::decide::baker_gap(&lambda, &c, n), crate::decide::baker_gap(&lambda, &c, n + 1)) {
            (Ok(a), Ok(b)) => b.is_smaller_than(&a) == Some(true),
            _ => false,
        }
    });
    (f == expected && mono, format!("(48*2^2)^10 = {f}, monotone {mono}"))
}

fn hardness(terms: u64) -> (bool, String) {
    let half = BigRational::new(1.into(), 2.into());
    let Ok(pt) = circle_point(&half) else { return (false, "bad point".into()) };
    let r = BigRational::from_integer(1.into());
    let Ok(pair) = hardness_lrs(&pt, &r) else { return (false, "construction failed".into()) };
    let mut seq = pair.u.initial.clone();
    let mut mismatch = 0;
    for n in 0..=terms as usize {
        if n >= 6 {
            let x = (0..6).fold(BigRational::zero(), |acc, i| acc + &pair.u.coeffs[i] * &seq[n - 1 - i]);
            seq.push(x);
        }
        mismatch += usize::from(seq[n] != closed_form(&pt, &r, n as u64).0);
    }
    let golden = cf_oracle_interval(&golden_turn(256), 1000, 1_000_000, 256).map(|o| o.value).unwrap_or(f64::NAN);
    let ok = mismatch == 0 && (golden - 0.447).abs() <= 1e-3;
    (ok, format!("{mismatch} mismatches up to n = {terms}, golden estimate {golden:.4}"))
}

fn decomposition(terms: u64) -> (bool, String) {
    let u = Lrs::from_i64(&[2, -2], &[1, 1]).expect("valid");
    match degenerate_decomposition(&u) {
        Ok(d) => {
            let l = d.modulus;
            let matches = (0..=terms).all(|n| d.subsequences[(n % l) as usize].term(n / l) == u.term(n));
            (l == 4 && d.subsequences.len() == 4 && matches, format!("modulus {l}, interleaving matches {matches}"))
        }
        Err(e) => (false, e.to_string()),
    }
}

fn unresolved_replay() -> (bool, String) {
    let u = Lrs::from_i64(&[12, -66, 180, -125], &[1, 5, 65, 485]).expect("valid");
    let cfg = Config { prefix_cutoff: 2000, ..Config::default() };
    let Ok(v) = decide_positivity(&u, &cfg) else { return (false, "engine error".into()) };
    let cert = v.to_json();
    let symbolic = cert["threshold"]["symbolic"].is_string();
    let identical = replay(&cert).map(|r| r.identical).unwrap_or(false);
    let ok = v.kind == VerdictKind::Unresolved && symbolic && identical && v.checked_up_to == Some(2000);
    (ok, format!("verdict {}, symbolic threshold {symbolic}, replay identical {identical}", v.kind.as_str()))
}

/// Run every check; `full` uses the acceptance-size parameters.
pub fn run(full: bool) -> Vec<Check> {
    let (count, cutoff) = if full { (1000, 10_000) } else { (60, 2000) };
    let (grid, kron) = if full { (1_000_000, 100_000) } else { (40_000, 20_000) };
    let checks: Vec<(&'static str, Box<dyn Fn() -> (bool, String)>)> = vec![
        ("oracle equivalence", Box::new(move || oracle_equivalence(count, cutoff))),
        ("ultimate positivity totality", Box::new(move || ultimate_totality(count, cutoff))),
        ("critical case", Box::new(critical_case)),
        ("torus decision", Box::new(move || torus_agreement(grid))),
        ("Kronecker density", Box::new(move || kronecker(kron, if full { 1e-2 } else { 5e-2 }))),
        ("Mignotte bound", Box::new(move || mignotte(if full { 200 } else { 40 }))),
        ("Baker plumbing", Box::new(baker)),
        ("hardness lab", Box::new(move || hardness(if full { 1000 } else { 200 }))),
        ("degenerate decomposition", Box::new(move || decomposition(500))),
        ("honest gap accounting", Box::new(unresolved_replay)),
    ];
    checks
        .into_iter()
        .enumerate()
        .map(|(i, (name, f))| {
            let t = Instant::now();
            let (passed, detail) = f();
            Check { id: i as u32 + 1, name, passed, detail, seconds: t.elapsed().as_secs_f64() }
        })
        .collect()
}

