use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rsl_core::rmt::{self, EnsembleClass, EnsembleSpec};
use rsl_core::{arith, lfunc, orbits, TruncationSpec};
use std::hint::black_box;

fn zeta(c: &mut Criterion) {
    let mut g = c.benchmark_group("hardy_z");
    for t in [100.0, 1000.0, 10000.0] {
        g.bench_with_input(BenchmarkId::from_parameter(t), &t, |b, &t| b.iter(|| lfunc::hardy_z(black_box(t)).unwrap()));
    }
    g.finish();
}

fn eigensolver(c: &mut Criterion) {
    let mut g = c.benchmark_group("eigenvalues");
    g.sample_size(20);
    for n in [50, 100, 200] {
        let spec = EnsembleSpec::new(EnsembleClass::Gue, n, 1.0, 1).unwrap();
        let m = rmt::ensemble_matrix(&spec, 0).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| b.iter(|| rmt::eigenvalues(black_box(m)).unwrap()));
    }
    g.finish();
}

fn sieve(c: &mut Criterion) {
    c.bench_function("sieve_primes/1e6", |b| b.iter(|| arith::sieve_primes(black_box(1_000_000)).unwrap()));
}

fn orbit_sums(c: &mut Criterion) {
    let trunc = TruncationSpec::open(1000, 3, 3);
    let orbit_list = orbits::ansatz_orbits(&trunc).unwrap();
    c.bench_function("nosc_prime_sum/P=1000", |b| b.iter(|| orbits::nosc_prime_sum(black_box(50.0), &trunc).unwrap()));
    c.bench_function("gutzwiller_sum/P=1000", |b| {
        b.iter(|| orbits::gutzwiller_sum(&orbit_list, black_box(50.0), trunc.rep_cutoff).unwrap())
    });
}

criterion_group!(benches, zeta, eigensolver, sieve, orbit_sums);
criterion_main!(benches);
