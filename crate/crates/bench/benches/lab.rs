use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rgglab::geometry::NormSpec;
use rgglab::graphkit::{chromatic_bounds, clique_number, fractional_chromatic};
use rgglab::limits::{f_chromatic_bounds, FeasibleCatalog, Intensity};
use rgglab::rgg::{build_graph, radius_for_t, sample_points, DensityModel};
use rgglab::scan::scan_ball;

fn limits(c: &mut Criterion) {
    let catalog = FeasibleCatalog::standard(NormSpec::euclidean(2));
    c.bench_function("f_chromatic_bounds t=10", |b| {
        b.iter(|| f_chromatic_bounds(black_box(Intensity::Finite(10.0)), &catalog).unwrap())
    });
}

fn graphs(c: &mut Criterion) {
    let norm = NormSpec::euclidean(2);
    let n = 10_000;
    let cloud = sample_points(&DensityModel::uniform(2), n, 1).unwrap();
    let r = radius_for_t(n as f64, 10.0, 1.0, 2);
    let gg = build_graph(&cloud, r, &norm).unwrap();

    let mut group = c.benchmark_group("n=1e4 t=10");
    group.sample_size(10);
    group.bench_function("build_graph", |b| b.iter(|| build_graph(&cloud, black_box(r), &norm).unwrap()));
    group.bench_function("scan_ball r/2", |b| b.iter(|| scan_ball(&cloud, black_box(0.5 * r), &norm).unwrap()));
    group.bench_function("clique_number", |b| b.iter(|| clique_number(gg.graph())));
    group.bench_function("chromatic_bounds", |b| b.iter(|| chromatic_bounds(gg.graph(), &[gg.grid_order()], None)));
    group.finish();

    let small = sample_points(&DensityModel::uniform(2), 120, 2).unwrap();
    let g = build_graph(&small, 0.2, &norm).unwrap();
    c.bench_function("fractional_chromatic n=120", |b| b.iter(|| fractional_chromatic(g.graph(), 1e-9).unwrap()));
}

criterion_group!(benches, limits, graphs);
criterion_main!(benches);
