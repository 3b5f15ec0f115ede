//! Micro-benchmarks of the arithmetic kernels everything else reduces to.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use kleinforms::matrix::Mat;
use kleinforms::FieldSpec;
use kleinforms_bench::gf2;

fn bench_field_mul(c: &mut Criterion) {
    let k8 = FieldSpec::canonical(8);
    let pairs: Vec<(u64, u64)> = (1..k8.order())
        .map(|a| (a, a.wrapping_mul(0x9d).wrapping_add(1) % k8.order()))
        .collect();
    c.bench_function("field_mul/GF(256)/255 products", |b| {
        b.iter(|| {
            let mut acc = 0u64;
            for &(x, y) in &pairs {
                acc ^= k8.mul(black_box(x), black_box(y));
            }
            acc
        });
    });
}

fn bench_congruence(c: &mut Criterion) {
    let k = gf2();
    let n = 12;
    let s = Mat::from_fn(k, n, n, |r, c| u64::from((r * 7 + c * 3) % 2 == 1));
    let m = Mat::from_fn(k, n, n, |r, c| u64::from(r <= c && (r + c) % 3 != 1));
    c.bench_function("congruence/12x12/GF(2)", |b| {
        b.iter(|| black_box(&s).congruence(black_box(&m)));
    });
}

fn bench_inverse(c: &mut Criterion) {
    let k = gf2();
    let n = 12;
    // An invertible unitriangular matrix with scattered fill.
    let m = Mat::from_fn(k, n, n, |r, c| {
        u64::from(r == c || (c > r && (r + 2 * c) % 3 == 0))
    });
    assert!(m.is_invertible());
    c.bench_function("inverse/12x12/GF(2)", |b| {
        b.iter(|| black_box(&m).inverse().unwrap());
    });
}

criterion_group!(benches, bench_field_mul, bench_congruence, bench_inverse);
criterion_main!(benches);
