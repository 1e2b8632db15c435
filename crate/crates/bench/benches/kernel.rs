use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fullgroup::kakutani::{canonical_equivalence, weld};
use fullgroup::{
    cycle_graph, minimal_periodic_partition, normal_form, positive_form, reduce_word, Cylinder, Element,
    OdometerSystem, DEFAULT_DEPTH_CAP,
};
use fullgroup_bench::{elements_at, positives, words};

fn compose(c: &mut Criterion) {
    let s = OdometerSystem::dyadic();
    let mut group = c.benchmark_group("compose");
    for depth in [4, 8, 12] {
        let xs = elements_at(&s, depth, 2);
        group.bench_with_input(BenchmarkId::from_parameter(depth), &xs, |b, xs| {
            b.iter(|| black_box(&xs[0]).compose(black_box(&xs[1])).unwrap())
        });
    }
    group.finish();
}

fn orbit_analysis(c: &mut Criterion) {
    let s = OdometerSystem::dyadic();
    let mut group = c.benchmark_group("cycle_graph");
    for depth in [4, 8, 12] {
        let h = elements_at(&s, depth, 1).pop().unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(depth), &h, |b, h| {
            b.iter(|| cycle_graph(black_box(h)))
        });
    }
    group.finish();

    let h = elements_at(&s, 6, 1).pop().unwrap();
    c.bench_function("minimal_periodic_partition/6", |b| {
        b.iter(|| minimal_periodic_partition(black_box(&h), DEFAULT_DEPTH_CAP).unwrap())
    });
}

fn normal_forms(c: &mut Criterion) {
    let s = OdometerSystem::dyadic();
    let hs = positives(&s, 4, 16);
    c.bench_function("normal_form/positive", |b| {
        b.iter(|| {
            for h in &hs {
                black_box(normal_form(h).unwrap());
            }
        })
    });
    c.bench_function("positive_form/positive", |b| {
        b.iter(|| {
            for h in &hs {
                black_box(positive_form(h));
            }
        })
    });
    let ws = words(&s, 12, 16);
    c.bench_function("reduce_word/12", |b| {
        b.iter(|| {
            for w in &ws {
                black_box(reduce_word(w).unwrap());
            }
        })
    });
}

fn welding(c: &mut Criterion) {
    let s = OdometerSystem::dyadic();
    let y = Cylinder { depth: 2, code: 1 };
    let kappa = canonical_equivalence(&s, y, &s, y).unwrap();
    let g = Element::generator(&s);
    c.bench_function("weld/build", |b| b.iter(|| weld(&s, &s, black_box(&kappa), DEFAULT_DEPTH_CAP).unwrap()));
    let w = weld(&s, &s, &kappa, DEFAULT_DEPTH_CAP).unwrap();
    let specs = [g.clone(), g.invert()];
    c.bench_function("weld/element", |b| {
        b.iter(|| w.weld_element(black_box(&specs), DEFAULT_DEPTH_CAP).unwrap())
    });
}

criterion_group!(benches, compose, orbit_analysis, normal_forms, welding);
criterion_main!(benches);
