use criterion::{criterion_group, criterion_main, Criterion};
use frobkp_core::hierarchy::recursion_check;
use frobkp_core::manifold::{coordinate_vector, metric, Label, Mode};
use frobkp_core::potential::{build_f, Superpotential};
use frobkp_core::sample::{gen_loop_point, gen_point};
use frobkp_core::submanifold::canonical_check;
use frobkp_core::{q, qi, Series, Side};

fn series(c: &mut Criterion) {
    let f = Series::from_terms([(4, qi(1)), (2, q(1, 3)), (0, q(-1, 5)), (-2, q(9, 16))]);
    c.bench_function("inverse at infinity, 32 steps", |b| {
        b.iter(|| f.inv(Side::Infinity, 32).unwrap())
    });
    c.bench_function("fourth root at infinity, 32 steps", |b| {
        b.iter(|| {
            f.fractional_power(&q(1, 4), &qi(1), Side::Infinity, 32)
                .unwrap()
        })
    });
}

fn gram(c: &mut Criterion) {
    let pt = gen_point(2, 1, 7, Mode::Polynomial).unwrap();
    c.bench_function("gram row (2,1), |i| <= 4", |b| {
        b.iter(|| {
            let x = coordinate_vector(&pt, Label::T(1)).unwrap();
            Label::all(2, 1, 4)
                .into_iter()
                .map(|v| metric(&pt, &x, &coordinate_vector(&pt, v).unwrap()).unwrap())
                .collect::<Vec<_>>()
        })
    });
}

fn potential(c: &mut Criterion) {
    c.bench_function("build F (2,2)", |b| b.iter(|| build_f(2, 2).unwrap()));
    c.bench_function("build F (3,1)", |b| b.iter(|| build_f(3, 1).unwrap()));
}

fn hierarchy(c: &mut Criterion) {
    let lp = gen_loop_point(2, 1, 3, 2).unwrap();
    c.bench_function("recursion check (2,1) h1 p=2", |b| {
        b.iter(|| recursion_check(&lp, Label::H(1), 2).unwrap())
    });
}

fn canonical(c: &mut Criterion) {
    let sp = Superpotential::new(2, 2).unwrap();
    let w = [0.3, -0.2, 0.1, 0.9];
    c.bench_function("canonical check (2,2)", |b| {
        b.iter(|| canonical_check(&sp, &w, 1e-9).unwrap())
    });
}

criterion_group!(benches, series, gram, potential, hierarchy, canonical);
criterion_main!(benches);
