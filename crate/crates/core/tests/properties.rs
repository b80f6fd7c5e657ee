//! Property tests against independent oracles.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

use vdc_core::dynamics::{
    birkhoff_average, circle_overlap, overlap_monte_carlo, qary_digits, reconstruct, rotation_overlap, DigitMapSystem,
    Observable, RotationSystem,
};
use vdc_core::equidist::discrepancy::{star_discrepancy, DiscrepancyMethod};
use vdc_core::equidist::{weyl_sum, weyl_sum_fixed};
use vdc_core::generators::{generate_family, generate_set, primes_up_to};
use vdc_core::normal::{block_frequencies, champernowne_digits, digit_prefix, Construction, DigitStream, StreamSpec};
use vdc_core::structural::{
    dq_filter, kmf_criterion, progression_verdict, shifted_prime_verdict, smallest_root_naive, IntPoly,
    KmfOutcome,
};
use vdc_core::witness::fejer::fejer_witness;
use vdc_core::witness::lp::{lp_witness_search, LpOptions, LpOutcome};
use vdc_core::witness::trig::grid_min;
use vdc_core::witness::verify::verify_witness;
use vdc_core::{RealExpr, SequenceSpec, SetSpec};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn trial_division(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn int_poly_text(c: &[i64]) -> String {
    c.iter()
        .enumerate()
        .map(|(i, a)| format!("({a})*n^{i}"))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn eval_int(c: &[i64], n: i64) -> BigInt {
    c.iter()
        .rev()
        .fold(BigInt::zero(), |acc, a| acc * n + BigInt::from(*a))
}

#[test]
fn sieve_matches_trial_division() {
    let fast = primes_up_to(100_000).unwrap();
    let slow: Vec<u64> = (0..=100_000).filter(|&n| trial_division(n)).collect();
    assert_eq!(fast, slow);
}

#[test]
fn power_log_is_well_distributed() {
    let spec = SequenceSpec::power_log("1", "3/2", "0").unwrap();
    let pts: Vec<f64> = generate_family(&spec, 100_000)
        .unwrap()
        .iter()
        .map(|v| v[0].fract_f64())
        .collect();
    let d = star_discrepancy(&pts, DiscrepancyMethod::Fast).unwrap().dstar;
    assert!(d < 0.05, "{d}");
}

#[test]
fn coincident_phases_have_unit_modulus() {
    let pts = vec![vec![0.25_f64, 0.5]; 257];
    let r = weyl_sum(&pts, &[3, -7]).unwrap();
    assert!((r.modulus - 1.0).abs() < 1e-12);
}

#[test]
fn rational_family_at_denominator_frequency_is_one() {
    for q in 2..=12i64 {
        let spec = SequenceSpec::kronecker(&format!("5/{q}")).unwrap();
        let vals = generate_family(&spec, 1000).unwrap();
        let phases: Vec<Vec<u128>> = vals.iter().map(|v| vec![v[0].fract_fixed()]).collect();
        let r = weyl_sum_fixed(&phases, &[q]).unwrap();
        // 5/q is rounded to 128 bits, so q·{5n/q} misses an integer by at most n·2^-128.
        assert!((r.re - 1.0).abs() < 1e-12 && r.im.abs() < 1e-12, "q = {q}: {r:?}");
    }
}

#[test]
fn champernowne_equals_identity_polynomial_stream() {
    for q in [2, 3, 10, 16] {
        let a = champernowne_digits(q, 20_000).unwrap();
        let poly = StreamSpec::new(
            q,
            Construction::Polynomial {
                g: RealExpr::parse("n").unwrap(),
                positive_start: true,
            },
        )
        .unwrap();
        assert_eq!(a, digit_prefix(&poly, 20_000).unwrap(), "q = {q}");
    }
}

#[test]
fn champernowne_counts_match_decimal_strings() {
    let text: String = (1..=10_000u32).map(|n| n.to_string()).collect();
    let digits = champernowne_digits(10, text.len()).unwrap();
    let freq = block_frequencies(&digits, 10, 2).unwrap();
    let bytes = text.as_bytes();
    let total = (bytes.len() - 1) as f64;
    let mut counts = vec![0u64; 100];
    for w in bytes.windows(2) {
        counts[((w[0] - b'0') * 10 + (w[1] - b'0')) as usize] += 1;
    }
    for (i, c) in counts.iter().enumerate() {
        assert_eq!(freq[i], *c as f64 / total, "block {i:02}");
    }
}

#[test]
fn lp_reaches_fejer_level_on_scaled_ranges() {
    for k in 2..=10i64 {
        for m in [1i64, 3] {
            let h: Vec<Vec<i64>> = (1..=k).flat_map(|j| [vec![j * m], vec![-j * m]]).collect();
            let eps = 1.0 / (k - 1) as f64;
            match lp_witness_search(&h, eps, &LpOptions::default()).unwrap() {
                LpOutcome::Feasible { witness } => {
                    assert!(witness.certified_min >= -eps, "K = {k}, m = {m}");
                    let member = |x: &[i64]| x[0] != 0 && x[0] % m == 0 && x[0].abs() <= k * m;
                    let v = verify_witness(&witness, &member, eps, 4 * witness.grid).unwrap();
                    assert!(v.is_ok(), "K = {k}, m = {m}: {v:?}");
                }
                other => panic!("K = {k}, m = {m}: {other:?}"),
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn set_enumeration_is_prefix_stable(a in 1i64..6, b in -5i64..6, n in 10u64..200, extra in 1u64..100) {
        let spec = SequenceSpec::polynomial(&[&int_poly_text(&[b, a, 1])]).unwrap();
        let set = SetSpec::new(spec, n + extra);
        let short = generate_set(&set, n).unwrap();
        let long = generate_set(&set, n + extra).unwrap();
        prop_assert!(long.elements.starts_with(&short.elements));
        prop_assert!(long.indices.starts_with(&short.indices));
    }

    #[test]
    fn integer_polynomials_are_exact(c in prop::collection::vec(-1000i64..1000, 1..5), n in 1usize..300) {
        let spec = SequenceSpec::polynomial(&[&int_poly_text(&c)]).unwrap();
        let vals = generate_family(&spec, n).unwrap();
        for (i, v) in vals.iter().enumerate() {
            let x = &v[0];
            prop_assert!(x.is_exact());
            prop_assert_eq!(x.floor().unwrap(), eval_int(&c, i as i64 + 1));
        }
    }

    #[test]
    fn weyl_modulus_is_at_most_one(
        pts in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 2), 1..300),
        h0 in -50i64..50, h1 in 1i64..50,
    ) {
        let r = weyl_sum(&pts, &[h0, h1]).unwrap();
        prop_assert!(r.modulus <= 1.0 + 1e-12);
    }

    #[test]
    fn weyl_sum_ignores_order(
        pts in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 1), 2..500),
        h in 1i64..1000, seed in any::<u64>(),
    ) {
        let mut shuffled = pts.clone();
        let mut s = seed;
        for i in (1..shuffled.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (s >> 33) as usize % (i + 1));
        }
        let a = weyl_sum(&pts, &[h]).unwrap();
        let b = weyl_sum(&shuffled, &[h]).unwrap();
        prop_assert!((a.re - b.re).abs() <= 2f64.powi(-40));
        prop_assert!((a.im - b.im).abs() <= 2f64.powi(-40));
    }

    #[test]
    fn discrepancy_of_union_is_at_most_weighted_average(
        a in prop::collection::vec(0.0f64..1.0, 1..200),
        b in prop::collection::vec(0.0f64..1.0, 1..200),
    ) {
        let d = |p: &[f64]| star_discrepancy(p, DiscrepancyMethod::Fast).unwrap().dstar;
        let mut both = a.clone();
        both.extend_from_slice(&b);
        let avg = (a.len() as f64 * d(&a) + b.len() as f64 * d(&b)) / both.len() as f64;
        prop_assert!(d(&both) <= avg + 1e-12);
        prop_assert!((d(&both) - star_discrepancy(&both, DiscrepancyMethod::Oracle).unwrap().dstar).abs() <= 1e-12);
    }

    #[test]
    fn fejer_minimum_is_exact(k in 2u64..40, m in 1i64..12) {
        let w = fejer_witness(&[m], k).unwrap();
        let target = -1.0 / (k - 1) as f64;
        let (min, _) = grid_min(&w, (k * m as u64 * 8).next_power_of_two());
        prop_assert!(min >= target - 1e-9);
        prop_assert!((w.coefficient_sum() - 1.0).abs() < 1e-12);
        prop_assert!((w.eval(&[1.0 / (k as f64 * m as f64)]) - target).abs() < 1e-9);
    }

    #[test]
    fn scaled_witness_keeps_its_bound(k in 2u64..20, c in 1i64..8) {
        let w = fejer_witness(&[1], k).unwrap();
        let s = w.scaled(c).unwrap();
        let eps = 1.0 / (k - 1) as f64 + 1e-9;
        let member = |h: &[i64]| h[0] != 0 && h[0] % c == 0 && h[0].abs() < k as i64 * c;
        prop_assert!(verify_witness(&s, &member, eps, 4 * s.grid).unwrap().is_ok());
        let x = 0.1234;
        prop_assert!((s.eval(&[x / c as f64]) - w.eval(&[x])).abs() < 1e-9);
    }

    #[test]
    fn kmf_roots_agree_with_enumeration(c in prop::collection::vec(-30i64..30, 2..5), q_max in 2u64..60) {
        prop_assume!(c.last().map_or(false, |&a| a > 0));
        let poly = IntPoly::from_i64(&c);
        let v = kmf_criterion(&poly, q_max).unwrap();
        prop_assert!(v.recheck());
        let first_missing = (1..=q_max).find(|&q| smallest_root_naive(&poly, q).is_none());
        match (&v.outcome, first_missing) {
            (KmfOutcome::ObstructionAtQ { q, .. }, Some(m)) => prop_assert_eq!(*q, m),
            (KmfOutcome::AllRootsFound { .. }, None) => {}
            (o, m) => prop_assert!(false, "{:?} vs naive {:?}", o, m),
        }
        for r in &v.roots {
            prop_assert_eq!(r.root, smallest_root_naive(&poly, r.q));
        }
    }

    #[test]
    fn dq_sets_shrink_as_q_grows(q in 1u64..6, deg in 1u32..4) {
        let g = SequenceSpec::polynomial(&[&format!("n^{deg}")]).unwrap();
        let a = dq_filter(&g, &[0], q, 2000).unwrap();
        let b = dq_filter(&g, &[0], q + 1, 2000).unwrap();
        prop_assert!(b.indices.iter().all(|i| a.indices.contains(i)));
    }

    #[test]
    fn refutation_certificates_recheck(a in 1i64..40, b in -60i64..60, pa in -12i64..12, pb in -40i64..40) {
        if let vdc_core::structural::ProgressionVerdict::NotVdc { certificate } = progression_verdict(a, b).unwrap() {
            prop_assert!(b.rem_euclid(a) != 0);
            prop_assert!(certificate.recheck().unwrap());
        } else {
            prop_assert_eq!(b.rem_euclid(a), 0);
        }
        prop_assume!(pa != 0 && pb != 0);
        let v = shifted_prime_verdict(pa, pb).unwrap();
        prop_assert_eq!(v.vdc, pa.abs() == pb.abs());
        if let Some(cert) = v.certificate {
            prop_assert!(cert.recheck().unwrap());
        }
    }

    #[test]
    fn overlap_is_symmetric_and_bounded(bn in 1i64..99, tn in 0i64..1000) {
        let beta = rat(bn, 100);
        let t = rat(tn, 1000);
        let o = circle_overlap(&beta, &t);
        prop_assert!(o >= BigRational::zero() && o <= beta);
        if !t.is_zero() {
            prop_assert_eq!(o, circle_overlap(&beta, &(BigRational::one() - t)));
        }
    }

    #[test]
    fn rotation_overlap_matches_monte_carlo(u in 0i64..50, len in 1i64..50, n in 1i64..1000) {
        let sys = RotationSystem::parse("sqrt(2) - 1", &format!("{u}/100"), &format!("{}/100", u + len)).unwrap();
        let n = BigInt::from(n);
        let exact = rotation_overlap(&sys, &n).unwrap().to_f64();
        let mc = overlap_monte_carlo(&sys, &n, 20_000, 7).unwrap();
        prop_assert!((exact - mc).abs() < 2e-3, "{} vs {}", exact, mc);
    }

    #[test]
    fn rotation_preserves_measure(u in 0i64..90, len in 1i64..10, x0 in 0i64..100) {
        // Orbit averages of an interval indicator converge to its length.
        let (u, v) = (format!("{u}/100"), format!("{}/100", u + len));
        let sys = RotationSystem::parse("sqrt(2) - 1", "0", "1/2").unwrap();
        let f = Observable::Indicator { u: RealExpr::parse(&u).unwrap(), v: RealExpr::parse(&v).unwrap() };
        let avg = birkhoff_average(&sys, &f, 100_000, &RealExpr::parse(&format!("{x0}/100")).unwrap()).unwrap();
        prop_assert!((avg - len as f64 / 100.0).abs() < 1e-3, "{}", avg);
    }

    #[test]
    fn overlap_integrates_to_measure_squared(bn in 1i64..20) {
        // ∫ μ(A ∩ (A + t)) dt = μ(A)², sampled exactly on a grid fine enough
        // that the piecewise-linear integrand is integrated without error.
        let beta = rat(bn, 20);
        let g = 400i64;
        let sum = (0..g).fold(BigRational::zero(), |acc, i| acc + circle_overlap(&beta, &rat(i, g)));
        prop_assert_eq!(sum / BigRational::from_integer(g.into()), beta.clone() * beta);
    }

    #[test]
    fn digits_reconstruct_and_shift(num in 0i64..10_000, q in 2u32..17) {
        let x = rat(num, 10_007);
        let sys = DigitMapSystem::new(q, RealExpr::rational(x.clone())).unwrap();
        let d = qary_digits(&sys, 60).unwrap();
        let approx = reconstruct(&d, q);
        let tail = rat(1, 1) / BigRational::from_integer(BigInt::from(q).pow(60));
        prop_assert!(approx <= x && x.clone() - approx < tail);
        let next = qary_digits(&sys.step().unwrap(), 59).unwrap();
        prop_assert_eq!(&d[1..], &next[..]);
    }

    #[test]
    fn streams_are_deterministic_and_chunking_invariant(q in 2u32..17, n in 1usize..3000, split in 0usize..3000) {
        let spec = StreamSpec::champernowne(q).unwrap();
        let whole = digit_prefix(&spec, n).unwrap();
        let split = split.min(n);
        let mut s = DigitStream::new(&spec).unwrap();
        let mut parts = s.take_digits(split).unwrap();
        parts.extend(s.take_digits(n - split).unwrap());
        prop_assert_eq!(&parts, &whole);
        prop_assert_eq!(whole, digit_prefix(&spec, n).unwrap());
    }

    #[test]
    fn block_frequencies_marginalize(q in 2u32..6, n in 50usize..2000) {
        let d = champernowne_digits(q, n).unwrap();
        let f1 = block_frequencies(&d, q, 1).unwrap();
        let f2 = block_frequencies(&d, q, 2).unwrap();
        let total: f64 = f2.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        // Summing blocks over their second digit drops only the last digit.
        let qs = q as usize;
        for a in 0..qs {
            let marg: f64 = (0..qs).map(|b| f2[a * qs + b]).sum::<f64>() * (n - 1) as f64;
            let direct = f1[a] * n as f64 - if d[n - 1] as usize == a { 1.0 } else { 0.0 };
            prop_assert!((marg - direct).abs() < 1e-6);
        }
    }
}

#[test]
fn reconstruct_of_terminating_digits_is_exact() {
    assert_eq!(reconstruct(&[1, 0, 1], 2), rat(5, 8));
    assert_eq!(reconstruct(&[1, 4, 2, 8, 5, 7], 10).to_f64().map(|x| (x * 1e6).round()), Some(142857.0));
}
