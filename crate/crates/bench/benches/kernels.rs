use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use entloc_bench::{filter, oracle_config, partial_config, polarizing_config, protocol_state, tomography_counts};
use entloc_core::fockoracle::oracle_stage_states;
use entloc_core::{formulas, metrics, pipeline, tomolab};

fn measures(c: &mut Criterion) {
    let rho = protocol_state();
    c.bench_function("concurrence", |b| b.iter(|| metrics::concurrence(black_box(&rho))));
    c.bench_function("bell_max", |b| b.iter(|| metrics::bell_max(black_box(&rho))));
    c.bench_function("linear_entropy", |b| b.iter(|| metrics::linear_entropy(black_box(&rho))));
}

fn protocol(c: &mut Criterion) {
    let (iso, pol, f) = (partial_config(), polarizing_config(), filter());
    c.bench_function("run_protocol/isotropic", |b| b.iter(|| pipeline::run_protocol(black_box(&iso), &f)));
    c.bench_function("run_protocol/polarizing", |b| b.iter(|| pipeline::run_protocol(black_box(&pol), &f)));
    c.bench_function("partial_suite", |b| b.iter(|| formulas::partial_suite(black_box(0.85), black_box(0.3), 0.121)));
    let oc = oracle_config();
    c.bench_function("oracle_stage_states", |b| b.iter(|| oracle_stage_states(black_box(&oc))));
}

fn tomography(c: &mut Criterion) {
    let (rec, set) = tomography_counts();
    c.bench_function("reconstruct", |b| b.iter(|| tomolab::reconstruct(black_box(&rec), &set)));
    let mut g = c.benchmark_group("monte_carlo");
    g.sample_size(10);
    g.bench_function("100_trials", |b| b.iter(|| tomolab::monte_carlo_uncertainty(black_box(&rec), &set, 100, 1)));
    g.finish();
}

criterion_group!(benches, measures, protocol, tomography);
criterion_main!(benches);
