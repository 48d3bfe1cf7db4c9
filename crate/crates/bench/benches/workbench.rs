use criterion::{black_box, criterion_group, criterion_main, Criterion};
use qorbit_bench::{disc_points, sample_params};
use qorbit_core::heis::check_relations;
use qorbit_core::qfun::{kernel_gram, kernel_plus, ramanujan_psi};
use qorbit_core::series::{classify, gram_diagonal};
use qorbit_core::{Complex64, Kernel, QSeriesContext};

fn heis(c: &mut Criterion) {
    c.bench_function("check_relations n=1 d=6", |b| b.iter(|| check_relations(black_box(1), 6).unwrap()));
}

fn series(c: &mut Criterion) {
    let params = sample_params();
    c.bench_function("classify 500 points", |b| {
        b.iter(|| params.iter().map(|p| classify(black_box(p)).casimir.re).sum::<f64>())
    });
    c.bench_function("gram_diagonal 500 points", |b| {
        b.iter(|| params.iter().filter(|p| gram_diagonal(p, 30).positive).count())
    });
}

fn qfun(c: &mut Criterion) {
    let ctx = QSeriesContext::new(0.5).unwrap();
    let (x, y) = (Complex64::from_polar(0.7, 0.3), Complex64::from_polar(0.6, 2.0));
    c.bench_function("kernel_plus", |b| b.iter(|| kernel_plus(&ctx, black_box(x), black_box(y), -1.3).unwrap()));
    let pts = disc_points(10);
    c.bench_function("kernel_gram 10 points", |b| {
        b.iter(|| kernel_gram(&ctx, Kernel::Plus { l: -1.0 }, black_box(&pts)).unwrap())
    });
    let t = Complex64::new(ctx.t(), 0.0);
    let (a, bb, z) = (Complex64::new(2.0, 0.5), Complex64::new(0.1, 0.2), Complex64::from_polar(0.5, 1.0));
    c.bench_function("ramanujan_psi", |b| b.iter(|| ramanujan_psi(&ctx, black_box(a), bb, t, z).unwrap()));
}

criterion_group!(benches, heis, series, qfun);
criterion_main!(benches);
