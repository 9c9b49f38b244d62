use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use scanpath_bench::{density_map, gui_image, lissajous};
use scanpath_core::metrics::dtw;
use scanpath_core::saliency::itti_koch_saliency;
use scanpath_core::{rollout, RolloutConfig};

fn bench_dtw(c: &mut Criterion) {
    let mut group = c.benchmark_group("dtw");
    for n in [10, 100, 500] {
        let (a, b) = (lissajous(n, 0.0), lissajous(n, 0.3));
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |bench, _| {
            bench.iter(|| dtw(black_box(&a), black_box(&b)).unwrap())
        });
    }
    group.finish();
}

fn bench_itti_koch(c: &mut Criterion) {
    let mut group = c.benchmark_group("itti_koch");
    group.sample_size(10);
    for side in [128, 225, 512] {
        let img = gui_image(side);
        group.bench_with_input(BenchmarkId::from_parameter(side), &side, |bench, _| {
            bench.iter(|| itti_koch_saliency(black_box(&img)).unwrap())
        });
    }
    group.finish();
}

fn bench_rollout(c: &mut Criterion) {
    let map = density_map(225);
    let mut group = c.benchmark_group("rollout_225");
    for n in [5, 10] {
        let cfg = RolloutConfig {
            n_fixations: n,
            ..RolloutConfig::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(n), &cfg, |bench, cfg| {
            bench.iter(|| rollout(black_box(&map), cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_dtw, bench_itti_koch, bench_rollout);
criterion_main!(benches);
