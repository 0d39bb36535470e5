use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use revrules::canon::{constructive_canonicalize, gray_path};
use revrules::io::{parse_circuit, print_circuit};
use revrules::normalize::canonicalize;
use revrules::rules::optimize;
use revrules::simulate;
use revrules_bench::{circuits, permutations};

fn bench_simulate(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulate");
    for width in [4usize, 8, 12] {
        let input = circuits(1, width, 50, 1).remove(0);
        group.bench_with_input(BenchmarkId::from_parameter(width), &input, |b, circ| b.iter(|| simulate(circ).unwrap()));
    }
    group.finish();
}

fn bench_constructive(c: &mut Criterion) {
    let mut group = c.benchmark_group("constructive");
    for width in [3usize, 5, 7] {
        let path = gray_path(width).unwrap();
        let p = permutations(2, width, 1).remove(0);
        group.bench_with_input(BenchmarkId::from_parameter(width), &p, |b, p| {
            b.iter(|| constructive_canonicalize(p, &path).unwrap())
        });
    }
    group.finish();
}

fn bench_rewriting(c: &mut Criterion) {
    let mut group = c.benchmark_group("canonicalize");
    group.sample_size(10);
    for (width, len) in [(3usize, 15usize), (4, 15), (5, 10)] {
        let path = gray_path(width).unwrap();
        let input = circuits(3, width, len, 1).remove(0);
        group.bench_with_input(BenchmarkId::new(format!("w{width}"), len), &input, |b, circ| {
            b.iter(|| canonicalize(circ, &path).unwrap())
        });
    }
    group.finish();
}

fn bench_optimize(c: &mut Criterion) {
    let input = circuits(4, 6, 60, 1).remove(0);
    c.bench_function("optimize/w6x60", |b| b.iter(|| optimize(&input, 500)));
}

fn bench_text(c: &mut Criterion) {
    let input = circuits(5, 8, 200, 1).remove(0);
    let text = print_circuit(&input);
    c.bench_function("text/print", |b| b.iter(|| print_circuit(&input)));
    c.bench_function("text/parse", |b| b.iter(|| parse_circuit(&text).unwrap()));
}

criterion_group!(benches, bench_simulate, bench_constructive, bench_rewriting, bench_optimize, bench_text);
criterion_main!(benches);
