use criterion::{black_box, criterion_group, criterion_main, Criterion};

use vdc_core::equidist::discrepancy::{star_discrepancy, DiscrepancyMethod};
use vdc_core::equidist::weyl_sum_fixed;
use vdc_core::generators::{fractional_parts, generate_family, primes_up_to};
use vdc_core::normal::champernowne_digits;
use vdc_core::witness::lp::{lp_witness_search, LpOptions};
use vdc_core::SequenceSpec;

fn weyl(c: &mut Criterion) {
    let spec = SequenceSpec::polynomial(&["sqrt(2) n^2"]).unwrap();
    let phases = fractional_parts(&generate_family(&spec, 100_000).unwrap()).unwrap();
    c.bench_function("weyl_sum 1e5", |b| b.iter(|| weyl_sum_fixed(black_box(&phases), &[7]).unwrap()));
}

fn discrepancy(c: &mut Criterion) {
    let pts: Vec<f64> = (1..=100_000u64).map(|n| (n as f64 * 0.618_033_988_749_895).fract()).collect();
    c.bench_function("star_discrepancy 1e5", |b| {
        b.iter(|| star_discrepancy(black_box(&pts), DiscrepancyMethod::Fast).unwrap())
    });
}

fn lp(c: &mut Criterion) {
    let h: Vec<Vec<i64>> = (1..=10).map(|j| vec![j]).collect();
    let mut g = c.benchmark_group("lp");
    g.sample_size(10);
    g.bench_function("ten frequencies", |b| {
        b.iter(|| lp_witness_search(black_box(&h), 0.12, &LpOptions::default()).unwrap())
    });
    g.finish();
}

fn sieve(c: &mut Criterion) {
    c.bench_function("primes_up_to 1e7", |b| b.iter(|| primes_up_to(black_box(10_000_000)).unwrap()));
}

fn champernowne(c: &mut Criterion) {
    c.bench_function("champernowne 1e6", |b| b.iter(|| champernowne_digits(10, black_box(1_000_000)).unwrap()));
}

criterion_group!(benches, weyl, discrepancy, lp, sieve, champernowne);
criterion_main!(benches);
