use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use melnikov_core::sampling;
use melnikov_core::triangle::{melnikov_decompose, melnikov_eval, melnikov_eval_quadrature, melnikov_zero_report};

fn melnikov(c: &mut Criterion) {
    let mut rng = sampling::rng(3);
    let spec = sampling::perturbation_spec(&mut rng, 5);
    let dec = melnikov_decompose(&spec).unwrap();
    c.bench_function("decompose_n5", |b| b.iter(|| melnikov_decompose(black_box(&spec)).unwrap()));
    c.bench_function("eval_closed_n5", |b| b.iter(|| melnikov_eval(&dec, black_box(0.01)).unwrap()));
    c.bench_function("eval_quadrature_n5", |b| {
        b.iter(|| melnikov_eval_quadrature(&spec, black_box(0.01)).unwrap())
    });
    let mut g = c.benchmark_group("zeros");
    g.sample_size(10);
    g.bench_function("zero_report_n5", |b| b.iter(|| melnikov_zero_report(black_box(&spec), 64).unwrap()));
    g.finish();
}

criterion_group!(benches, melnikov);
criterion_main!(benches);
