use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sharpmin_core::legendre::{self, DualGrid};
use sharpmin_core::metricopt::{cat0_check, ekeland, FiniteFunctional};
use sharpmin_core::{fixtures, sharpness, ExtReal, GridFunction};

fn grid_1d(n: usize) -> GridFunction {
    let values = (0..n)
        .map(|j| {
            let x = -2.0 + 4.0 * j as f64 / (n - 1) as f64;
            ExtReal::Finite(x.abs() + (3.0 * x).sin().powi(2))
        })
        .collect();
    GridFunction::new(vec![(-2.0, 2.0)], vec![n], values).unwrap()
}

fn conjugate(c: &mut Criterion) {
    let mut g = c.benchmark_group("conjugate_1d");
    for n in [101usize, 401, 1601] {
        let f = grid_1d(n);
        let dual = DualGrid::auto(&f, n);
        g.bench_with_input(BenchmarkId::new("factorized", n), &n, |b, _| {
            b.iter(|| legendre::conjugate(black_box(&f), &dual).unwrap())
        });
        if n <= 401 {
            g.bench_with_input(BenchmarkId::new("brute", n), &n, |b, _| {
                b.iter(|| legendre::conjugate_brute(black_box(&f), &dual).unwrap())
            });
        }
    }
    g.finish();
}

fn sharpness_triple(c: &mut Criterion) {
    let mut g = c.benchmark_group("sharpness");
    for seed in [1u64, 2] {
        let f = fixtures::random_cloud_seeded(seed).unwrap();
        g.bench_with_input(BenchmarkId::new("verify", f.len()), &f, |b, f| {
            b.iter(|| sharpness::verify_default(black_box(f)).unwrap())
        });
    }
    g.finish();
}

fn ekeland_iteration(c: &mut Criterion) {
    let mut r = ChaCha8Rng::seed_from_u64(5);
    let space = fixtures::random_metric_space(&mut r, 50, 3).unwrap();
    let values: Vec<f64> = (0..50).map(|_| r.gen_range(0.0..10.0)).collect();
    let j = FiniteFunctional::from_finite(space, &values, 0).unwrap();
    let x0 = (0..50).max_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap();
    c.bench_function("ekeland_50", |b| b.iter(|| ekeland(black_box(&j), x0, 10.0, 1.0).unwrap()));
}

fn cat0(c: &mut Criterion) {
    let mut r = ChaCha8Rng::seed_from_u64(6);
    let t = fixtures::random_tree(&mut r, 30).unwrap();
    let q: Vec<_> = (0..1000)
        .map(|_| {
            (
                fixtures::random_location(&mut r, &t),
                fixtures::random_location(&mut r, &t),
                fixtures::random_location(&mut r, &t),
                r.gen_range(0.0..=1.0),
            )
        })
        .collect();
    c.bench_function("cat0_1000", |b| b.iter(|| cat0_check(&t, black_box(&q), 1e-9)));
}

criterion_group!(benches, conjugate, sharpness_triple, ekeland_iteration, cat0);
criterion_main!(benches);
