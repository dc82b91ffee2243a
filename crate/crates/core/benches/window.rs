use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use geoknot::{certify_q0, evaluate_window, CheckOptions, Complex64, CuspData, Execution, Window};

fn square() -> CuspData {
    let one = Complex64::new(1.0, 0.0);
    CuspData::new("square", one, Complex64::new(0.0, 1.0), 0.5, 0.5, one).unwrap()
}

fn modes() -> Vec<(&'static str, Execution)> {
    let mut v = vec![("sequential", Execution::Sequential)];
    if cfg!(feature = "parallel") {
        v.push(("parallel", Execution::Parallel));
    }
    v
}

fn bench_window(c: &mut Criterion) {
    let cusp = square();
    let opts = CheckOptions::new(1e-9, cusp.nearest_lift_gap(4));
    let mut group = c.benchmark_group("evaluate_window");
    for half in [25i64, 50, 100] {
        let window = Window::new(-half, half, -half, half).unwrap();
        for (name, mode) in modes() {
            group.bench_with_input(BenchmarkId::new(name, window.len()), &window, |b, w| {
                b.iter(|| evaluate_window(black_box(&cusp), w, &opts, mode))
            });
        }
    }
    group.finish();
}

fn bench_certify(c: &mut Criterion) {
    let cusp = square();
    let opts = CheckOptions::new(1e-9, cusp.nearest_lift_gap(4));
    let mut group = c.benchmark_group("certify_q0");
    group.sample_size(10);
    for limit in [100i64, 500] {
        for (name, mode) in modes() {
            group.bench_with_input(BenchmarkId::new(name, limit), &limit, |b, &l| {
                b.iter(|| certify_q0(black_box(&cusp), l, &opts, 2000, mode).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_window, bench_certify);
criterion_main!(benches);
