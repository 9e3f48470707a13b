use criterion::{criterion_group, criterion_main, Criterion};
use hypflow_bench::perturbed;
use hypflow_core::spaces::build_half_plane;
use hypflow_core::{prox, Objective, Point, ProxConfig};

fn graph_prox(c: &mut Criterion) {
    let pt = perturbed(24, 3);
    let s = pt.space();
    let f = Objective::squared_distance(s, Point::Vertex(0), 1.0, 40.0).unwrap();
    let x = Point::Vertex(17);
    let config = ProxConfig::new(2.0);
    c.bench_function("prox/perturbed_tree_24", |b| {
        b.iter(|| prox(s, &f, &x, &config).unwrap())
    });
}

fn plane_prox(c: &mut Criterion) {
    let h = build_half_plane();
    let f = Objective::distance(&h, Point::plane(0.0, 1.0), 1.0).unwrap();
    let x = Point::plane(2.0, 1.5);
    let config = ProxConfig::new(0.5);
    c.bench_function("prox/half_plane", |b| {
        b.iter(|| prox(&h, &f, &x, &config).unwrap())
    });
}

criterion_group!(benches, graph_prox, plane_prox);
criterion_main!(benches);
