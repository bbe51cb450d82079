//! Benchmarks for the hot paths: Puiseux solving, series convolution,
//! braces, homological perturbation and eigenvalue extraction.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use num_complex::Complex64;

use nonarch_core::ainf::braces;
use nonarch_core::floer::{deformed_chain_model, DiskClass, PotentialModel};
use nonarch_core::novikov::{puiseux_roots, NovikovPolynomial, NovikovScalar, Rational};
use nonarch_core::quantum::qh_projective;
use nonarch_core::series::LaurentSeries;

fn bench_puiseux(c: &mut Criterion) {
    // lambda^5 - T lambda^2 - T^3: mixed-slope polygon
    let p = NovikovPolynomial::new(vec![
        NovikovScalar::t_power(Rational::from_int(3)).neg(),
        NovikovScalar::zero(),
        NovikovScalar::t_power(Rational::one()).neg(),
        NovikovScalar::zero(),
        NovikovScalar::zero(),
        NovikovScalar::one(),
    ]);
    c.bench_function("puiseux degree-5 mixed polygon", |b| {
        b.iter(|| puiseux_roots(black_box(&p), Rational::from_int(4)).unwrap())
    });
}

fn bench_series_mul(c: &mut Criterion) {
    let cutoff = Rational::from_int(4);
    let mut f = LaurentSeries::zero_with_cutoff(3, cutoff);
    let mut g = LaurentSeries::zero_with_cutoff(3, cutoff);
    for i in -2i64..3 {
        for j in -2i64..3 {
            let c1 = NovikovScalar::monomial(
                Complex64::new(1.0 + i as f64, j as f64),
                Rational::new((i + 3).max(1), 2),
            );
            f.insert(vec![i, j, 0], c1.clone());
            g.insert(vec![j, 0, i], c1);
        }
    }
    c.bench_function("laurent series convolution 25x25", |b| {
        b.iter(|| f.mul(black_box(&g)).unwrap())
    });
}

fn bench_braces(c: &mut Criterion) {
    let model = PotentialModel::clifford(2, Rational::one(), Rational::from_int(2), 4).unwrap();
    let m = &model.minimal_structure;
    c.bench_function("brace m{m} on the clifford model", |b| {
        b.iter(|| braces(black_box(m), &[m]).unwrap())
    });
}

fn bench_hpl(c: &mut Criterion) {
    let classes = vec![
        DiskClass::new(Rational::one(), vec![1, 0], Complex64::new(1.0, 0.0)),
        DiskClass::new(Rational::new(3, 2), vec![2, 0], Complex64::new(0.5, 0.0)),
    ];
    let (m_chain, con) = deformed_chain_model(2, &classes, Rational::from_int(3), 4).unwrap();
    c.bench_function("homological perturbation to the minimal model", |b| {
        b.iter(|| nonarch_core::ainf::hpl_minimal_model(black_box(&m_chain), &con, 4).unwrap())
    });
}

fn bench_eigenvalues(c: &mut Criterion) {
    let ring = qh_projective(5, Rational::one());
    c.bench_function("c1 eigenvalues of QH(CP^5)", |b| {
        b.iter(|| ring.c1_eigenvalues(Rational::from_int(3)).unwrap())
    });
}

criterion_group!(
    benches,
    bench_puiseux,
    bench_series_mul,
    bench_braces,
    bench_hpl,
    bench_eigenvalues
);
criterion_main!(benches);
