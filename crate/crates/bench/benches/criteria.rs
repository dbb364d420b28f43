use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tvm_core::criteria::{classify, s_reg_from, ThresholdModel};
use tvm_core::graph::{check_distance_regular, Family, HypercubeIntersections};
use tvm_core::sweep::evaluate;

fn distance_regularity(c: &mut Criterion) {
    let mut group = c.benchmark_group("check_distance_regular");
    for dim in [6, 8, 10] {
        let g = Family::Hypercube { dim }.build().unwrap();
        group.bench_with_input(BenchmarkId::new("hypercube", dim), &g, |b, g| {
            b.iter(|| check_distance_regular(black_box(g)))
        });
    }
    group.finish();
}

fn classification(c: &mut Criterion) {
    let m = ThresholdModel::uniform(Family::Dodecahedron.build().unwrap(), 2);
    c.bench_function("classify/dodecahedron", |b| b.iter(|| classify(black_box(&m))));
    let path = Family::Path { vertices: 439 };
    c.bench_function("evaluate/path(439)", |b| b.iter(|| evaluate(black_box(&path), 100)));
}

fn closed_form(c: &mut Criterion) {
    let t = HypercubeIntersections::new(300);
    c.bench_function("s_reg/hypercube(300)", |b| b.iter(|| s_reg_from(black_box(&t), 100)));
}

criterion_group!(benches, distance_regularity, classification, closed_form);
criterion_main!(benches);
