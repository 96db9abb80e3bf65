//! Screen-solving throughput: eigensolve vs two-sided recursion vs the exact
//! oracle, plus caustic sampling and orbit closure.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use threej_core::half_integer::HalfInt;
use threej_core::recurrence::{oracle_screen, solve_screen_with, SolveMethod};
use threej_core::screen::ScreenSpec;
use threej_core::semiclassics::{caustic_curve, GeomSpec, DEFAULT_SAMPLES_PER_UNIT};
use threej_core::symmetry::orbit;
use threej_core::{exact_3j, ThreeJArgs};

fn h(t: i64) -> HalfInt {
    HalfInt::from_twice(t)
}

fn bench_solve_screen(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_screen");
    for a in [5i64, 15, 30, 50] {
        let spec = ScreenSpec::new(h(2 * a), h(2 * a + 20), h(4)).unwrap();
        group.bench_with_input(BenchmarkId::new("eigen", a), &spec, |bench, spec| {
            bench.iter(|| solve_screen_with(black_box(spec), SolveMethod::Eigen).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("recursion", a), &spec, |bench, spec| {
            bench.iter(|| solve_screen_with(black_box(spec), SolveMethod::Recursion).unwrap())
        });
    }
    group.finish();
}

fn bench_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact_oracle");
    group.bench_function("single_3j_a8", |bench| {
        let args = ThreeJArgs::from_twice(16, 16, 20, 4, -6, 2).unwrap();
        bench.iter(|| exact_3j(black_box(&args)))
    });
    for a in [2i64, 5, 8] {
        let spec = ScreenSpec::new(h(2 * a), h(2 * a), h(2)).unwrap();
        group.bench_with_input(BenchmarkId::new("screen", a), &spec, |bench, spec| {
            bench.iter(|| oracle_screen(black_box(spec)))
        });
    }
    group.finish();
}

fn bench_semiclassics(c: &mut Criterion) {
    let geom = GeomSpec::from_j(h(41), h(81), h(10)).unwrap();
    c.bench_function("caustic_curve_default_density", |bench| {
        bench.iter(|| caustic_curve(black_box(&geom), DEFAULT_SAMPLES_PER_UNIT))
    });
}

fn bench_symmetry(c: &mut Criterion) {
    let args = ThreeJArgs::from_twice(2, 5, 7, 0, -1, 1).unwrap();
    c.bench_function("orbit_closure_72", |bench| {
        bench.iter(|| orbit(black_box(&args)))
    });
}

criterion_group!(
    benches,
    bench_solve_screen,
    bench_oracle,
    bench_semiclassics,
    bench_symmetry
);
criterion_main!(benches);
