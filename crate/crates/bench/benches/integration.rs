use criterion::{criterion_group, criterion_main, Criterion};
use rkforge::integrate::{convergence_study, integrate, kepler_problem, linear_problem};
use rkforge_bench::float;
use std::hint::black_box;

fn stepping(c: &mut Criterion) {
    let kepler = kepler_problem();
    let explicit = float("rk4");
    let implicit = float("example-4.1");
    c.bench_function("integrate/kepler/rk4/h=0.01", |b| {
        b.iter(|| integrate(black_box(&explicit), &kepler, 0.01, 1.0).unwrap())
    });
    c.bench_function("integrate/kepler/example-4.1/h=0.01", |b| {
        b.iter(|| integrate(black_box(&implicit), &kepler, 0.01, 1.0).unwrap())
    });
    let decay = linear_problem(-2.0);
    c.bench_function("integrate/decay/example-4.2/h=0.01", |b| {
        let t = float("example-4.2");
        b.iter(|| integrate(black_box(&t), &decay, 0.01, 1.0).unwrap())
    });
}

fn study(c: &mut Criterion) {
    let kepler = kepler_problem();
    let t = float("example-4.1");
    let mut g = c.benchmark_group("convergence_study");
    g.sample_size(10);
    g.bench_function("kepler/example-4.1/5-halvings", |b| {
        b.iter(|| convergence_study(black_box(&t), &kepler, 0.2, 5, 1.0).unwrap())
    });
    g.finish();
}

criterion_group!(benches, stepping, study);
criterion_main!(benches);
