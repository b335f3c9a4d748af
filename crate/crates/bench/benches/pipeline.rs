//! Benchmarks for the stages that dominate a degree run: matrix assembly,
//! fraction-free elimination, modular rank, and the exhaustive minor gcd.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use alvero_core::certify::{certify_tuple, Config};
use alvero_core::linalg::{
    minor_gcd_exhaustive, nonzero_maximal_minor, rank_mod_p, rank_over_rationals,
};
use alvero_core::macaulay::{build_matrix, Tuple};
use alvero_core::oracle::search_counterexamples;
use alvero_core::poly::GeneratorTable;
use num_bigint::BigUint;

fn bench_generator_table(c: &mut Criterion) {
    c.bench_function("generator_table_n5", |b| {
        b.iter(|| GeneratorTable::new(black_box(5)).unwrap())
    });
}

fn bench_build_matrix(c: &mut Criterion) {
    let t4 = GeneratorTable::new(4).unwrap();
    let t5 = GeneratorTable::new(5).unwrap();
    let tuple4 = Tuple::new(4, vec![1, 2, 3]).unwrap();
    let tuple5 = Tuple::new(5, vec![1, 2, 3, 4]).unwrap();
    c.bench_function("build_matrix_n4", |b| {
        b.iter(|| build_matrix(4, black_box(&tuple4), &t4).unwrap())
    });
    c.bench_function("build_matrix_n5", |b| {
        b.iter(|| build_matrix(5, black_box(&tuple5), &t5).unwrap())
    });
}

fn bench_rank(c: &mut Criterion) {
    let t5 = GeneratorTable::new(5).unwrap();
    let m5 = build_matrix(5, &Tuple::new(5, vec![1, 2, 3, 4]).unwrap(), &t5).unwrap();
    let mut group = c.benchmark_group("rank");
    group.sample_size(10);
    group.bench_function("bareiss_n5", |b| {
        b.iter(|| rank_over_rationals(black_box(&m5)).unwrap())
    });
    let p = BigUint::from((1u64 << 61) - 1);
    group.bench_function("mod_p_n5", |b| {
        b.iter(|| rank_mod_p(black_box(&m5), &p).unwrap())
    });
    group.bench_function("maximal_minor_n5", |b| {
        b.iter(|| nonzero_maximal_minor(black_box(&m5)).unwrap())
    });
    group.finish();
}

fn bench_exhaustive_oracle(c: &mut Criterion) {
    let t4 = GeneratorTable::new(4).unwrap();
    let m4 = build_matrix(4, &Tuple::new(4, vec![1, 2, 3]).unwrap(), &t4).unwrap();
    let mut group = c.benchmark_group("minor_gcd");
    group.sample_size(10);
    group.bench_function("exhaustive_n4_3876_minors", |b| {
        b.iter(|| minor_gcd_exhaustive(black_box(&m4), 10_000).unwrap())
    });
    group.finish();
}

fn bench_certify(c: &mut Criterion) {
    let config = Config {
        jobs: 1,
        ..Config::default()
    };
    let tuple = Tuple::new(5, vec![1, 2, 3, 4]).unwrap();
    let mut group = c.benchmark_group("certify");
    group.sample_size(10);
    group.bench_function("tuple_n5", |b| {
        b.iter(|| certify_tuple(5, black_box(&tuple), &config).unwrap())
    });
    group.finish();
}

fn bench_search(c: &mut Criterion) {
    c.bench_function("search_n3_f13", |b| {
        b.iter(|| search_counterexamples(3, 13, 1, 100_000_000).unwrap())
    });
}

criterion_group!(
    benches,
    bench_generator_table,
    bench_build_matrix,
    bench_rank,
    bench_exhaustive_oracle,
    bench_certify,
    bench_search
);
criterion_main!(benches);
