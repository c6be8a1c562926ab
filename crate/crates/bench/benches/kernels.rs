//! Benchmarks of the numerical kernels: shooting, weighted quadrature,
//! constant evaluation and a full verification point.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use ellbounds_core::constants::{self, ExponentWindow};
use ellbounds_core::params::ProblemParams;
use ellbounds_core::profile::{self, SolveOptions};
use ellbounds_core::{norms, suite};

fn bench_shooting(c: &mut Criterion) {
    let params = ProblemParams::new(3, 2.0, 1.0).unwrap();
    c.bench_function("lane_emden_shooting_d3_p2", |b| {
        b.iter(|| {
            profile::solve_lane_emden(
                black_box(params),
                black_box(1.0),
                black_box(5.0),
                SolveOptions::default(),
            )
            .unwrap()
        })
    });
}

fn bench_norms(c: &mut Criterion) {
    let params = ProblemParams::new(3, 2.0, 1.0).unwrap();
    let prof = suite::build_fixture(params, 1.0, 1e-10).unwrap();
    let r = 0.75 * prof.geometry_radius();
    c.bench_function("lq_norm_q4", |b| {
        b.iter(|| norms::lq_norm(black_box(&prof), black_box(4.0), black_box(r)).unwrap())
    });
    c.bench_function("lq_norm_q729", |b| {
        b.iter(|| norms::lq_norm_mag(black_box(&prof), black_box(729.0), black_box(r)).unwrap())
    });
    let sing = profile::singular_profile(ProblemParams::new(5, 2.0, 1.0).unwrap()).unwrap();
    c.bench_function("divergence_probe", |b| {
        b.iter(|| norms::divergence_probe(black_box(&sing), black_box(2.0), 1.0, 4).unwrap())
    });
}

fn bench_constants(c: &mut Criterion) {
    let params = ProblemParams::new(3, 0.5, 1.0).unwrap();
    let chain = ellbounds_core::RadiiChain::new(0.25, Some(0.5), 0.75, None).unwrap();
    let w = ExponentWindow::defaults(params);
    c.bench_function("harnack_sublinear_constant", |b| {
        b.iter(|| {
            constants::harnack::harnack_constant(
                black_box(params),
                black_box(&chain),
                &w,
                None,
                0.427,
            )
            .unwrap()
        })
    });
}

fn bench_suite_point(c: &mut Criterion) {
    let params = ProblemParams::new(3, 2.0, 1.0).unwrap();
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    group.bench_function("verify_point_d3_p2", |b| {
        b.iter(|| {
            suite::run_default(black_box(params), 1.0, &suite::SuiteOptions::default()).unwrap()
        })
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_shooting,
    bench_norms,
    bench_constants,
    bench_suite_point
);
criterion_main!(benches);
