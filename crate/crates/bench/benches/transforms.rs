//! Benchmarks for the hot paths: multiplier tables, conversions between
//! representations, and the Lefschetz pipelines.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use sphereval_core::lefschetz::{l_op, lambda_op};
use sphereval_core::mval::{builtin_pi, to_crofton, to_klain};
use sphereval_core::profiles::ZonalProfile;
use sphereval_core::transforms::{
    apply_multiplier_zonal, berg_conv_multiplier, multiplier_seq, TransformTag,
};

fn even_profile(n: usize, kmax: usize) -> ZonalProfile {
    let coeffs = (0..=kmax)
        .map(|k| {
            if k % 2 == 1 {
                0.0
            } else {
                0.7 / (1.0 + (k * k) as f64)
            }
        })
        .collect();
    ZonalProfile::new(n, coeffs).unwrap()
}

fn bench_multiplier_tables(c: &mut Criterion) {
    c.bench_function("cosine multipliers n=5 kmax=32", |b| {
        b.iter(|| multiplier_seq(&TransformTag::Cosine(2), black_box(5), 32).unwrap())
    });
    // warm the cache once so the benchmark isolates the lookup path
    let _ = berg_conv_multiplier(4, 3, 16).unwrap();
    c.bench_function("berg multipliers n=4 j=3 (cached)", |b| {
        b.iter(|| {
            for k in 0..=16usize {
                black_box(berg_conv_multiplier(4, 3, k).unwrap());
            }
        })
    });
}

fn bench_apply(c: &mut Criterion) {
    let g = even_profile(4, 32);
    let seq = multiplier_seq(&TransformTag::Cosine(3), 4, 32).unwrap();
    c.bench_function("apply cosine multipliers kmax=32", |b| {
        b.iter(|| apply_multiplier_zonal(black_box(&g), &seq).unwrap())
    });
}

fn bench_conversions(c: &mut Criterion) {
    let v = builtin_pi(4, 2, 24).unwrap();
    c.bench_function("generating -> crofton (n=4, kmax=24)", |b| {
        b.iter(|| to_crofton(black_box(&v)).unwrap())
    });
    c.bench_function("generating -> klain (n=4, kmax=24)", |b| {
        b.iter(|| to_klain(black_box(&v)).unwrap())
    });
}

fn bench_lefschetz(c: &mut Criterion) {
    let v = builtin_pi(4, 2, 24).unwrap();
    c.bench_function("derivation operator on generating form", |b| {
        b.iter(|| lambda_op(black_box(&v)).unwrap())
    });
    let w = builtin_pi(4, 1, 24).unwrap();
    c.bench_function("integration operator on generating form", |b| {
        b.iter(|| l_op(black_box(&w)).unwrap())
    });
}

criterion_group!(
    benches,
    bench_multiplier_tables,
    bench_apply,
    bench_conversions,
    bench_lefschetz
);
criterion_main!(benches);
