use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use supconv_core::{concave_envelope, make_extremal, make_random, search_cover, subdivide, sup_convolve_n, sup_convolve_pair};

fn dp(c: &mut Criterion) {
    let mut group = c.benchmark_group("sup_convolve_n");
    for &(k, res, n) in &[(1, 12, 3), (2, 12, 2), (2, 12, 3), (3, 6, 2)] {
        let f = make_extremal(k, res).unwrap().to_function().unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(format!("k{k}_N{res}_n{n}")), &f, |b, f| {
            b.iter(|| sup_convolve_n(black_box(f), n).unwrap())
        });
    }
    group.finish();

    let f = make_random(2, 8, 11, 1.0).unwrap().to_function().unwrap();
    let g = make_random(2, 8, 12, 1.0).unwrap().to_function().unwrap();
    c.bench_function("sup_convolve_pair/k2_N8", |b| b.iter(|| sup_convolve_pair(black_box(&f), black_box(&g)).unwrap()));
}

fn envelope(c: &mut Criterion) {
    let mut group = c.benchmark_group("concave_envelope");
    group.sample_size(20);
    for &(k, res) in &[(1, 24), (2, 8), (2, 12), (3, 6)] {
        let f = make_random(k, res, 5, 1.0).unwrap().to_function().unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(format!("k{k}_N{res}")), &f, |b, f| {
            b.iter(|| concave_envelope(black_box(f)).unwrap())
        });
    }
    group.finish();
}

fn cells(c: &mut Criterion) {
    let mut group = c.benchmark_group("subdivide");
    for &(k, n) in &[(2, 6), (3, 4), (4, 3)] {
        group.bench_function(format!("k{k}_n{n}"), |b| b.iter(|| subdivide(black_box(k), black_box(n)).unwrap()));
    }
    group.finish();
}

fn cover(c: &mut Criterion) {
    let mut group = c.benchmark_group("search_cover");
    group.sample_size(10);
    group.bench_function("k1_n2", |b| b.iter(|| search_cover(1, 2, 2, 1).unwrap()));
    group.bench_function("k2_n2", |b| b.iter(|| search_cover(2, 2, 2, 1).unwrap()));
    group.finish();
}

criterion_group!(benches, dp, envelope, cells, cover);
criterion_main!(benches);
