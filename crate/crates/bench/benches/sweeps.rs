use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use pou_core::instances;
use pou_core::kuhn::{euclidean_refine, KuhnGrid};
use pou_core::metric::distance_profile;
use pou_core::partition::{build_partition, vector_lipschitz, worst_partial_sum_lipschitz};

fn profile_and_partition(c: &mut Criterion) {
    let mut group = c.benchmark_group("partition");
    for step in [0.02, 0.005] {
        let inst = instances::general_example(1.0, 3, step);
        let n = inst.space.len();
        group.bench_with_input(BenchmarkId::new("profile", n), &inst, |b, inst| {
            b.iter(|| distance_profile(&inst.space, &inst.cover).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("build", n), &inst, |b, inst| {
            b.iter(|| build_partition(&inst.space, &inst.cover, black_box(2.0)).unwrap())
        });
    }
    group.finish();
}

fn lipschitz_sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    group.sample_size(20);
    for m in [2, 5] {
        let inst = instances::midpoint_example(1.0, m, 0.005);
        let pou = build_partition(&inst.space, &inst.cover, 1.0).unwrap();
        group.bench_function(BenchmarkId::new("worst_partial_sum", m), |b| {
            b.iter(|| worst_partial_sum_lipschitz(&pou, &inst.space))
        });
        group.bench_function(BenchmarkId::new("vector_l2", m), |b| {
            b.iter(|| vector_lipschitz(&pou, &inst.space, 2.0).unwrap())
        });
    }
    group.finish();
}

fn kuhn(c: &mut Criterion) {
    let mut group = c.benchmark_group("kuhn");
    for n in [2, 4, 8] {
        let grid = KuhnGrid::new(n, 0.5).unwrap();
        let x: Vec<f64> = (0..n).map(|i| 0.37 * i as f64 + 0.11).collect();
        group.bench_function(BenchmarkId::new("locate", n), |b| {
            b.iter(|| grid.locate(black_box(&x)).unwrap())
        });
    }
    let inst = instances::strip_cloud(41, 4.0, 1.0, 3.0);
    group.bench_function("refine_strip_41", |b| {
        b.iter(|| euclidean_refine(&inst.space, &inst.cover, 1.0).unwrap())
    });
    group.finish();
}

criterion_group!(benches, profile_and_partition, lipschitz_sweeps, kuhn);
criterion_main!(benches);
