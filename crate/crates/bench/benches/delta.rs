use criterion::{criterion_group, criterion_main, Criterion};
use hypflow_bench::perturbed;
use hypflow_core::{four_point_delta, DeltaMode, Point};

fn exact_delta(c: &mut Criterion) {
    let pt = perturbed(16, 5);
    let pts: Vec<Point> = (0..pt.graph().vertex_count()).map(Point::Vertex).collect();
    c.bench_function("delta/exact_vertices", |b| {
        b.iter(|| four_point_delta(pt.space(), &pts, DeltaMode::Exact).unwrap())
    });
}

fn sampled_delta(c: &mut Criterion) {
    let pt = perturbed(24, 5);
    let pts: Vec<Point> = (0..pt.graph().vertex_count()).map(Point::Vertex).collect();
    let mode = DeltaMode::Sampled {
        seed: 1,
        count: 100_000,
    };
    c.bench_function("delta/sampled_100k", |b| {
        b.iter(|| four_point_delta(pt.space(), &pts, mode).unwrap())
    });
}

criterion_group!(benches, exact_delta, sampled_delta);
criterion_main!(benches);
