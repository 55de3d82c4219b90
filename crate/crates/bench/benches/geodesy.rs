use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use jetgeo::connections::{grass_invariants, thomas_pi, Connection};
use jetgeo::expr::CoordinateFrame;
use jetgeo::geodesy::{ddot_gamma, dot_gamma, integrate_geodesic, residual2, GeodesicStart};
use jetgeo::sampling::{random_connection, random_subjet, rng_for};

const SPHERE: &str = include_str!("../../../specs/sphere.json");

fn sphere_geodesic(c: &mut Criterion) {
    let g = Connection::from_json(SPHERE).unwrap();
    let theta = Connection::zero(CoordinateFrame::numbered("x", 1, 1).unwrap());
    let start = GeodesicStart { x: 0.0, u: vec![0.3, 0.1], velocity: vec![1.0, 0.5] };
    let mut group = c.benchmark_group("rk4_sphere");
    for steps in [100, 1000] {
        group.bench_with_input(BenchmarkId::from_parameter(steps), &steps, |b, &steps| {
            b.iter(|| integrate_geodesic(&g, &theta, black_box(&start), 1e-3, steps).unwrap())
        });
    }
    group.finish();
}

fn residuals(c: &mut Criterion) {
    let mut group = c.benchmark_group("residual2");
    for (n, l) in [(1, 3), (2, 4), (3, 6)] {
        let g = random_connection(&mut rng_for(0, 0), &CoordinateFrame::numbered("u", l, n).unwrap(), 2);
        let p = random_subjet(&mut rng_for(0, 1), n, l - n, 1, &[]);
        let q = ddot_gamma(&g, &p).unwrap();
        group.bench_function(format!("n{n}_l{l}"), |b| b.iter(|| residual2(&g, black_box(&q)).unwrap()));
        group.bench_function(format!("dot_gamma_n{n}_l{l}"), |b| b.iter(|| dot_gamma(&g, black_box(&p)).unwrap()));
    }
    group.finish();
}

fn invariants(c: &mut Criterion) {
    let mut group = c.benchmark_group("invariants");
    group.sample_size(20);
    for (n, l) in [(1, 3), (2, 4)] {
        let g = random_connection(&mut rng_for(1, 0), &CoordinateFrame::numbered("u", l, n).unwrap(), 1);
        group.bench_function(format!("pi_l{l}"), |b| b.iter(|| thomas_pi(black_box(&g))));
        group.bench_function(format!("grass_n{n}_l{l}"), |b| b.iter(|| grass_invariants(black_box(&g), n).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, sphere_geodesic, residuals, invariants);
criterion_main!(benches);
