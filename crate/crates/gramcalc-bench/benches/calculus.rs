use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use gramcalc::bijection::{phi, phi_inverse, MapKind};
use gramcalc::grammar::Grammar;
use gramcalc::identities::{verify, CheckParams};
use gramcalc::permstat::{triangle, Permutation, StatKind};
use gramcalc::poly::LaurentPoly;
use gramcalc::series::{closed_form, FormulaId};

fn poly(s: &str) -> LaurentPoly {
    LaurentPoly::parse(s).unwrap()
}

fn bench_derivatives(c: &mut Criterion) {
    let run = Grammar::run();
    let a = poly("a");
    c.bench_function("derive_n run a n=10", |b| {
        b.iter(|| black_box(run.derive_n(&a, 10)))
    });
    let peak = Grammar::peak();
    c.bench_function("gen_series peak x order=12", |b| {
        b.iter(|| black_box(peak.gen_series(&poly("x"), 12)))
    });
}

fn bench_series(c: &mut Criterion) {
    c.bench_function("closed_form genx order=12", |b| {
        b.iter(|| black_box(closed_form(FormulaId::Genx, 12)))
    });
    let peak = Grammar::peak();
    let gx = peak.gen_series(&poly("x"), 12);
    let gy = peak.gen_series(&poly("y"), 12);
    c.bench_function("series product order=12", |b| b.iter(|| black_box(&gx * &gy)));
}

fn bench_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumeration");
    group.sample_size(10);
    group.bench_function("triangle updownrun n=8", |b| {
        b.iter(|| black_box(triangle(StatKind::UpDownRun, 8).unwrap()))
    });
    group.finish();
}

fn bench_bijection(c: &mut Criterion) {
    let sigma = Permutation::parse("1,5,4,6,7,3,9,8,2").unwrap();
    c.bench_function("phi updown n=9", |b| {
        b.iter(|| black_box(phi(MapKind::UpDown, &sigma)))
    });
    let tree = phi(MapKind::UpDown, &sigma);
    c.bench_function("phi_inverse updown n=9", |b| {
        b.iter(|| black_box(phi_inverse(MapKind::UpDown, &tree)))
    });
}

fn bench_identities(c: &mut Criterion) {
    let params = CheckParams { n_max: 5, order: 10 };
    c.bench_function("verify eq-LW-1 order=10", |b| {
        b.iter(|| black_box(verify("eq-LW-1", &params).unwrap()))
    });
}

criterion_group!(
    benches,
    bench_derivatives,
    bench_series,
    bench_enumeration,
    bench_bijection,
    bench_identities
);
criterion_main!(benches);
