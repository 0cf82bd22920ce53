use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use prodtri::{enumerate_flips, oracle, orders, phases, Dims};
use prodtri_bench::scrambled;

fn validate(c: &mut Criterion) {
    let mut g = c.benchmark_group("validate");
    for n in [3, 5, 7] {
        let t = scrambled(n, 1);
        g.bench_with_input(BenchmarkId::from_parameter(n), &t, |b, t| {
            b.iter(|| black_box(t.validate()))
        });
    }
    g.finish();
}

fn flips(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate_flips");
    for n in [3, 5] {
        let t = scrambled(n, 2);
        g.bench_with_input(BenchmarkId::from_parameter(n), &t, |b, t| {
            b.iter(|| black_box(enumerate_flips(t)))
        });
    }
    g.finish();
}

fn restriction(c: &mut Criterion) {
    let t = scrambled(6, 3);
    c.bench_function("restriction_order/n6", |b| {
        b.iter(|| black_box(orders::restriction_order(&t, 2, 3)))
    });
}

fn connect(c: &mut Criterion) {
    let mut g = c.benchmark_group("connect");
    g.sample_size(10);
    for n in [3, 4, 5] {
        let t = scrambled(n, 4);
        g.bench_with_input(BenchmarkId::from_parameter(n), &t, |b, t| {
            b.iter(|| black_box(phases::connect(t)))
        });
    }
    g.finish();
}

fn enumerate(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate");
    g.sample_size(10);
    for (m, n) in [(3, 3), (4, 2)] {
        let d = Dims::new(m, n).unwrap();
        g.bench_with_input(
            BenchmarkId::new("corpus", format!("{m}x{n}")),
            &d,
            |b, &d| b.iter(|| black_box(oracle::enumerate_triangulations(d))),
        );
    }
    g.finish();
}

criterion_group!(benches, validate, flips, restriction, connect, enumerate);
criterion_main!(benches);
