use std::time::Duration;

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use hypergeo::classify::{good_reduction_primes_with, p_curvature_coranks_with};
use hypergeo::modp::sections;
use hypergeo::{Exec, HypergeometricParameters};

fn strategies() -> [(&'static str, Exec); 2] {
    [
        ("sequential", Exec::Sequential),
        ("parallel", Exec::Parallel),
    ]
}

fn bench_sweeps(c: &mut Criterion) {
    let f = HypergeometricParameters::parse("1/9,4/9,5/9", "1/3,1").unwrap();
    let h = HypergeometricParameters::parse("1/5,1/5,1/5,1/5", "1/3,59044/5").unwrap();

    let mut group = c.benchmark_group("good_reduction_primes");
    group
        .sample_size(10)
        .measurement_time(Duration::from_secs(10));
    for (name, exec) in strategies() {
        group.bench_with_input(BenchmarkId::new(name, "h"), &exec, |b, &exec| {
            b.iter(|| good_reduction_primes_with(black_box(&h), Some(1000), exec).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("coranks");
    group.sample_size(10);
    for (name, exec) in strategies() {
        group.bench_with_input(BenchmarkId::new(name, "f"), &exec, |b, &exec| {
            b.iter(|| p_curvature_coranks_with(black_box(&f), Some(200), exec).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("sections");
    group.sample_size(10);
    for (name, exec) in strategies() {
        group.bench_with_input(BenchmarkId::new(name, 199), &exec, |b, &exec| {
            b.iter(|| sections(black_box(&f), 199, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_sweeps);
criterion_main!(benches);
