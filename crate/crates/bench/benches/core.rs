use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ttlab::randomness::Compressor;
use ttlab::streams::{pair_decode, pair_encode};
use ttlab::ComplexityEstimator;
use ttlab_bench::{mixed_stream, pair_reduction};

fn bench_pairing(c: &mut Criterion) {
    c.bench_function("pair roundtrip", |b| {
        b.iter(|| {
            let mut acc = 0u64;
            for x in 0..64u64 {
                let z = pair_encode(black_box(x), black_box(x * 7 + 3));
                acc ^= pair_decode(z).1;
            }
            acc
        })
    });
}

fn bench_streams(c: &mut Criterion) {
    let mut group = c.benchmark_group("prefix");
    for n in [1u64 << 10, 1 << 13] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| mixed_stream(7).prefix(n).unwrap())
        });
    }
    group.finish();
}

fn bench_reduction(c: &mut Criterion) {
    let red = pair_reduction();
    let oracle = mixed_stream(11);
    c.bench_function("apply reduction 4096", |b| {
        b.iter(|| red.apply(&oracle).prefix(4096).unwrap())
    });
}

fn bench_compressor(c: &mut Criterion) {
    let bits = mixed_stream(3).prefix(1 << 12).unwrap();
    let est = Compressor::default();
    c.bench_function("compressor prefixes 4096", |b| {
        b.iter(|| est.estimate_prefixes(black_box(&bits), 1 << 12).unwrap())
    });
}

criterion_group!(benches, bench_pairing, bench_streams, bench_reduction, bench_compressor);
criterion_main!(benches);
