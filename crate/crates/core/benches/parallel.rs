use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use restriction_core::linear::{state_of_art_table, PriorRegistry};
use restriction_core::params::verify_sweep;
use restriction_core::wolff::{run_suite, TrialConfig};
use restriction_core::Exec;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn table(c: &mut Criterion) {
    let registry = PriorRegistry::standard();
    let mut group = c.benchmark_group("table_3_200");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| state_of_art_table(3, black_box(200), &registry, exec).unwrap())
        });
    }
    group.finish();
}

fn params(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_sweep_30");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| verify_sweep(black_box(30), exec).unwrap())
        });
    }
    group.finish();
}

fn wolff(c: &mut Criterion) {
    let config = TrialConfig::new(3, 1, 2000.0, (0..8).collect(), 5000);
    let mut group = c.benchmark_group("wolff_suite");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| run_suite(black_box(&config), exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, table, params, wolff);
criterion_main!(benches);
