use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use nsw_bench::fixture;
use nsw_core::{exact_optimum, solve_dichotomous, two_value_approx, OracleConfig};

fn approx(c: &mut Criterion) {
    let mut group = c.benchmark_group("two_value_approx");
    for &(n, m) in &[(10, 40), (50, 200), (200, 1000)] {
        let inst = fixture(n, m, 2, 5, 7);
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{n}x{m}")),
            &inst,
            |b, inst| b.iter(|| two_value_approx(black_box(inst)).unwrap()),
        );
    }
    group.finish();
}

fn dichotomous(c: &mut Criterion) {
    let inst = fixture(100, 500, 0, 1, 11);
    c.bench_function("solve_dichotomous/100x500", |b| {
        b.iter(|| solve_dichotomous(black_box(&inst)))
    });
}

fn oracle(c: &mut Criterion) {
    let inst = fixture(3, 9, 2, 5, 3);
    let mut group = c.benchmark_group("exact_optimum/3x9");
    for parallel in [false, true] {
        let cfg = OracleConfig::default().parallel(parallel);
        group.bench_with_input(BenchmarkId::from_parameter(parallel), &cfg, |b, cfg| {
            b.iter(|| exact_optimum(black_box(&inst), cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, approx, dichotomous, oracle);
criterion_main!(benches);
