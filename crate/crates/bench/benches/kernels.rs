use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ptperm::invariance::{run_pair, search_3mode};
use ptperm::random::{random_mat2, random_matn, trial_rng};
use ptperm::{
    compose_geometry, expm2, perm2, perm_n, visibility, visibility_map, AxisRange, CouplerParams,
    Cplx, Geometry,
};

fn permanents(c: &mut Criterion) {
    let m = random_mat2(&mut trial_rng(1, 0));
    c.bench_function("perm2", |b| b.iter(|| perm2(black_box(&m))));
    let mut group = c.benchmark_group("perm_n");
    for n in [3, 6, 8, 10, 12] {
        let a = random_matn(&mut trial_rng(2, n as u64), n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| {
            b.iter(|| perm_n(black_box(a)).unwrap())
        });
    }
    group.finish();
}

fn propagation(c: &mut Criterion) {
    let h = random_mat2(&mut trial_rng(3, 0));
    c.bench_function("expm2", |b| b.iter(|| expm2(black_box(&h), black_box(1.7))));
    let p = CouplerParams::new(0.85, Cplx::new(0.83 * 0.85, 0.41 * 0.85), 3.0).unwrap();
    c.bench_function("geometry visibility", |b| {
        b.iter(|| visibility(&compose_geometry(Geometry::MMt, black_box(&p))))
    });
}

fn sweeps(c: &mut Criterion) {
    let kl = AxisRange::new(0.0, 2.0 * std::f64::consts::PI, 100).unwrap();
    let gok = AxisRange::new(0.0, 4.0, 100).unwrap();
    let mut group = c.benchmark_group("runs");
    group.sample_size(10);
    group.bench_function("visibility_map 100x100", |b| {
        b.iter(|| visibility_map(Geometry::MXmtx, kl, gok, 1.0).unwrap())
    });
    group.bench_function("run_pair 1e4", |b| {
        b.iter(|| run_pair(10_000, 7, 1e-10).unwrap())
    });
    group.bench_function("search_3mode 1e2", |b| {
        b.iter(|| search_3mode(100, 1, 1e-10).unwrap())
    });
    group.finish();
}

criterion_group!(benches, permanents, propagation, sweeps);
criterion_main!(benches);
