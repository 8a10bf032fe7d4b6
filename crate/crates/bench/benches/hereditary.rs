use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use hermc::corpus::corpus_formula;
use hermc::{algorithm1, collapse_check, eval_sentence, her_bruteforce};
use hermc_bench::{alg1_cases, bruteforce_cases, collapse_cases, random_case};

fn alg1(c: &mut Criterion) {
    let mut group = c.benchmark_group("algorithm1");
    for (name, p, s) in alg1_cases(&[8, 16, 32]) {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| algorithm1(black_box(&s), &p).unwrap())
        });
    }
    group.finish();
}

fn collapse(c: &mut Criterion) {
    let mut group = c.benchmark_group("collapse");
    for (name, p, s) in collapse_cases(&[8, 32, 128]) {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| collapse_check(black_box(&s), &p).unwrap())
        });
    }
    group.finish();
}

fn bruteforce(c: &mut Criterion) {
    let mut group = c.benchmark_group("bruteforce");
    group.sample_size(10);
    for (name, p, s) in bruteforce_cases(&[8, 12]) {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| her_bruteforce(black_box(&s), &p).unwrap())
        });
    }
    group.finish();
}

fn evaluate(c: &mut Criterion) {
    let p3 = corpus_formula("p3", None).unwrap();
    let s = random_case(8, 1);
    c.bench_function("eval/p3/random8", |b| b.iter(|| eval_sentence(black_box(&s), &p3).unwrap()));
}

criterion_group!(benches, alg1, collapse, bruteforce, evaluate);
criterion_main!(benches);
