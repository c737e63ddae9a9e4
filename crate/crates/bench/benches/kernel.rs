use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use orelab_bench::{ore, ore_poly, ring, sample_pair, unit_series};
use orelab_core::free::{free_of, Word};
use orelab_core::lazy::{theta_mod, umat_of};
use orelab_core::ore::ore_mul;
use orelab_core::series::{right_inverse, series_mul};
use orelab_core::suites::{run_suite, SuiteParams};

fn ore_products(c: &mut Criterion) {
    let mut g = c.benchmark_group("ore_mul");
    for (name, r) in [
        ("weyl", ore("Poly(Z,y)", "id", Some("d_dy"))),
        ("one_sided", ore("Poly(Z,y)", "const_term", Some("coeff_shift"))),
        ("M2(Z/2) inner", ore("M2(Z/2)", "inner", None)),
    ] {
        for degree in [2, 4, 8] {
            let (p, q) = (ore_poly(&r, degree, 1), ore_poly(&r, degree, 2));
            g.bench_with_input(BenchmarkId::new(name, degree), &degree, |b, _| {
                b.iter(|| ore_mul(black_box(&p), black_box(&q)).unwrap())
            });
        }
    }
    g.finish();
}

fn series(c: &mut Criterion) {
    let mut g = c.benchmark_group("series");
    for spec in [
        "Series(Z/4;sigma=id;prec=8)",
        "Series(P(Z/2);sigma=shift;prec=8)",
        "Series(M2(Z/2);sigma=inner;prec=8)",
    ] {
        let s = ring(spec);
        let (p, q) = (unit_series(&s, 1), unit_series(&s, 2));
        g.bench_function(BenchmarkId::new("mul", spec), |b| {
            b.iter(|| series_mul(black_box(&p), black_box(&q)).unwrap())
        });
        g.bench_function(BenchmarkId::new("right_inverse", spec), |b| {
            b.iter(|| right_inverse(black_box(&p)).unwrap())
        });
    }
    g.finish();
}

fn umat(c: &mut Criterion) {
    let mut g = c.benchmark_group("umat");
    let u = ring("UMat(Z/4)");
    let (m, n) = sample_pair(&u, 3);
    g.bench_function("banded product", |b| b.iter(|| u.mul(black_box(&m), black_box(&n)).unwrap()));
    g.bench_function("theta mod x^8", |b| b.iter(|| theta_mod(&u, black_box(&m), 8).unwrap()));
    let um = umat_of(&u).unwrap();
    g.bench_function("shift sigma", |b| b.iter(|| um.shift_sigma(black_box(&m)).unwrap()));
    g.finish();
}

fn rewriting(c: &mut Criterion) {
    let s = ring("Free(u,v,x|xu=0,xv=0)");
    let f = free_of(&s).unwrap();
    let w = Word(vec![0, 1, 2, 2, 1, 0, 2, 1]);
    c.bench_function("free normal form (length 8)", |b| {
        b.iter(|| f.rules().normal_form(black_box(&w)))
    });
}

fn suites(c: &mut Criterion) {
    let mut g = c.benchmark_group("suite");
    g.sample_size(10);
    let p = SuiteParams::default();
    for name in ["kernel_powers", "theta", "free_independence", "rank_search"] {
        g.bench_function(name, |b| b.iter(|| run_suite(name, &p).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, ore_products, series, umat, rewriting, suites);
criterion_main!(benches);
