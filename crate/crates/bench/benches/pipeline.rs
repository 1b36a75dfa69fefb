use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sumset_core::{
    convex_hull, ehrhart_interpolate, growth_series, khovanskii_constant, rho_certificate,
    LatticePointSet, TheoremChecker,
};

fn sets() -> Vec<(&'static str, LatticePointSet)> {
    let from = |pts: &[&[i64]]| LatticePointSet::from_i64(pts).unwrap();
    vec![
        ("line", from(&[&[0], &[2], &[3]])),
        ("square", from(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])),
        ("plane5", from(&[&[0, 0], &[2, 1], &[1, 3], &[-1, 1], &[1, -1]])),
        ("simplex3", from(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])),
    ]
}

fn hull(c: &mut Criterion) {
    let mut g = c.benchmark_group("convex_hull");
    for (name, a) in sets() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &a, |b, a| b.iter(|| convex_hull(black_box(a))));
    }
    g.finish();
}

fn constant(c: &mut Criterion) {
    let mut g = c.benchmark_group("khovanskii_constant");
    g.sample_size(10);
    for (name, a) in sets() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &a, |b, a| {
            b.iter(|| khovanskii_constant(black_box(a)))
        });
    }
    g.finish();
}

fn growth(c: &mut Criterion) {
    let mut g = c.benchmark_group("growth_series");
    for (name, a) in sets() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &a, |b, a| b.iter(|| growth_series(black_box(a), 20)));
    }
    g.finish();
}

fn ehrhart(c: &mut Criterion) {
    let mut g = c.benchmark_group("ehrhart_interpolate");
    for (name, a) in sets() {
        let p = convex_hull(&a).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(name), &p, |b, p| b.iter(|| ehrhart_interpolate(black_box(p))));
    }
    g.finish();
}

fn theorem(c: &mut Criterion) {
    let mut g = c.benchmark_group("theorem_check");
    g.sample_size(10);
    for (name, a) in sets() {
        let rho = rho_certificate(&a).unwrap();
        let checker = TheoremChecker::new(&rho).unwrap();
        let h = rho.scale + 6;
        g.bench_with_input(BenchmarkId::new(name, h), &h, |b, &h| b.iter(|| checker.check(black_box(h))));
    }
    g.finish();
}

criterion_group!(benches, hull, constant, growth, ehrhart, theorem);
criterion_main!(benches);
