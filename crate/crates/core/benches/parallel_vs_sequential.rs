//! Rayon pool versus the sequential path on two representative workloads:
//! a figure grid and a short slice of the verification suite.

use coherekit::figures::fig2;
use coherekit::harness::run_all;
use coherekit::Execution;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Execution); 2] = [("parallel", Execution::Parallel), ("sequential", Execution::Sequential)];

fn figure_grid(c: &mut Criterion) {
    let mut group = c.benchmark_group("fig2_grid_61");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| fig2(61, (-2.0, 2.0), exec).unwrap())
        });
    }
    group.finish();
}

fn verify_slice(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_theorem3_100");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| run_all(0, Some("theorem3"), Some(100), exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, figure_grid, verify_slice);
criterion_main!(benches);
