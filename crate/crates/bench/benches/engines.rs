use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use onc_kesten::fock::{poisson_moment_operator, position_moment, CltExpansion, FockEngine};
use onc_kesten::kesten::KestenMeasure;
use onc_kesten::moments::{
    mixed_moment_brownian, poisson_moment, r_by_closed_form, r_by_route, Route,
};
use onc_kesten::partition::Limits;
use onc_kesten_bench::{nested_signature, three_interval_signature};

fn moment_routes(c: &mut Criterion) {
    let limits = Limits::default();
    let mut group = c.benchmark_group("r_n");
    for route in [
        Route::Enumeration,
        Route::Recursion,
        Route::Jacobi,
        Route::Delaney,
    ] {
        group.bench_with_input(BenchmarkId::new(route.name(), 5), &route, |b, &route| {
            b.iter(|| r_by_route(black_box(5), route, &limits).unwrap())
        });
    }
    group.bench_function("closed/12", |b| {
        b.iter(|| r_by_closed_form(black_box(12)).unwrap())
    });
    group.finish();
}

fn mixed_moments(c: &mut Criterion) {
    let limits = Limits::default();
    let mut group = c.benchmark_group("brownian");
    for (name, (family, sig)) in [
        ("nested6", nested_signature()),
        ("three8", three_interval_signature()),
    ] {
        let engine = FockEngine::new(&family);
        group.bench_function(BenchmarkId::new("operator", name), |b| {
            b.iter(|| position_moment(&engine, black_box(&sig), &limits).unwrap())
        });
        group.bench_function(BenchmarkId::new("partitions", name), |b| {
            b.iter(|| mixed_moment_brownian(black_box(&sig), &limits).unwrap())
        });
    }
    group.finish();
}

fn poisson(c: &mut Criterion) {
    let limits = Limits::default();
    let mut group = c.benchmark_group("poisson");
    group.sample_size(10);
    group.bench_function("operator/6", |b| {
        b.iter(|| poisson_moment_operator(black_box(6), &limits).unwrap())
    });
    group.bench_function("partitions/6", |b| {
        b.iter(|| poisson_moment(black_box(6), &limits).unwrap())
    });
    group.finish();
}

fn analytics(c: &mut Criterion) {
    let m = KestenMeasure::new(0.3, 0.2).unwrap();
    c.bench_function("quadrature/m10", |b| {
        b.iter(|| m.quadrature_moment(black_box(10), 1e-12).unwrap())
    });
    let mut group = c.benchmark_group("clt");
    group.sample_size(10);
    group.bench_function("expansion/6", |b| {
        b.iter(|| CltExpansion::new(black_box(6)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, moment_routes, mixed_moments, poisson, analytics);
criterion_main!(benches);
