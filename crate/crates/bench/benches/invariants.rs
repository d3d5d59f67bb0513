use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fibrepos::positivity::{asymptotic_threshold, margin_polynomial, verify_theorem};
use fibrepos::pushforward::{deg_pushforward, hilbert_rank_oracle, rank_fiber};
use fibrepos::sweep::{run_sweep, InstanceRanges};
use fibrepos_bench::{wide, worked};

fn pushforward(c: &mut Criterion) {
    let (spec, amb) = wide();
    let mut g = c.benchmark_group("pushforward");
    for h in [1, 10, 40] {
        g.bench_with_input(BenchmarkId::new("rank_fiber", h), &h, |b, &h| {
            b.iter(|| rank_fiber(black_box(&spec), amb.r, h))
        });
        g.bench_with_input(BenchmarkId::new("hilbert_oracle", h), &h, |b, &h| {
            b.iter(|| hilbert_rank_oracle(black_box(&spec), amb.r, h))
        });
        g.bench_with_input(BenchmarkId::new("deg_pushforward", h), &h, |b, &h| {
            b.iter(|| deg_pushforward(black_box(&spec), amb.r, amb.d, h))
        });
    }
    g.finish();
}

fn positivity(c: &mut Criterion) {
    for (name, (spec, amb)) in [("worked", worked()), ("wide", wide())] {
        c.bench_function(&format!("verify_theorem/{name}"), |b| b.iter(|| verify_theorem(black_box(&spec), &amb)));
        c.bench_function(&format!("margin_polynomial/{name}"), |b| {
            b.iter(|| margin_polynomial(black_box(&spec), &amb))
        });
        let scan = 10 * spec.sum_k();
        c.bench_function(&format!("asymptotic_threshold/{name}"), |b| {
            b.iter(|| asymptotic_threshold(black_box(&spec), &amb, scan))
        });
    }
}

fn sweep(c: &mut Criterion) {
    let ranges = InstanceRanges::default();
    let mut g = c.benchmark_group("sweep");
    g.sample_size(10);
    g.bench_function("seed42_x50", |b| b.iter(|| run_sweep(42, black_box(50), &ranges)));
    g.finish();
}

criterion_group!(benches, pushforward, positivity, sweep);
criterion_main!(benches);
