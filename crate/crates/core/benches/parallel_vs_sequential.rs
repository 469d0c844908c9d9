//! Sequential against rayon-parallel execution for the trial-heavy paths.
//!
//! Run with `cargo bench -p incseq`. Without the `parallel` feature both
//! arms take the sequential path, which makes the overhead of the
//! abstraction itself visible.

use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use incseq::experiments::card_soak;
use incseq::measures::{exact_tv_distance_with, tv_monte_carlo, AdulterationSpec};
use incseq::{Execution, RngStream};

const ARMS: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn bench_exact_tv(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact_tv");
    group
        .sample_size(10)
        .measurement_time(Duration::from_secs(10));
    for n in [8usize, 9] {
        let spec = AdulterationSpec::new(n, n / 2).unwrap();
        for (name, exec) in ARMS {
            group.bench_with_input(BenchmarkId::new(name, n), &spec, |b, &spec| {
                b.iter(|| exact_tv_distance_with(black_box(spec), 10, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_tv_monte_carlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("tv_monte_carlo");
    group.sample_size(10);
    let trials = 2_000u64;
    group.throughput(Throughput::Elements(trials));
    for n in [100usize, 1000] {
        let spec = AdulterationSpec::new(n, (n as f64).sqrt() as usize).unwrap();
        for (name, exec) in ARMS {
            group.bench_with_input(BenchmarkId::new(name, n), &spec, |b, &spec| {
                b.iter(|| tv_monte_carlo(spec, trials, RngStream::new(1, 0), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_card_soak(c: &mut Criterion) {
    let mut group = c.benchmark_group("card_soak");
    group.sample_size(10);
    let trials = 5_000u64;
    group.throughput(Throughput::Elements(trials));
    let shapes = [(48, 16), (192, 64)];
    for (name, exec) in ARMS {
        group.bench_function(name, |b| {
            b.iter(|| card_soak(black_box(&shapes), trials, 3, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_exact_tv,
    bench_tv_monte_carlo,
    bench_card_soak
);
criterion_main!(benches);
