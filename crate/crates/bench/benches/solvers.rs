use std::collections::BTreeSet;

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use resolab_bench::small_family;
use resolab_core::delta::find_delta_system;
use resolab_core::independence::product_family;
use resolab_core::rng::Rng;
use resolab_core::solvers::{max_almost_disjoint_dense, max_disjoint_dense};
use resolab_core::TraceSpace;

fn disjoint(c: &mut Criterion) {
    let mut g = c.benchmark_group("max_disjoint_dense");
    for n in [10usize, 16, 24] {
        let space = TraceSpace::new(small_family(n as u64, n, 5), 2, 1).unwrap();
        g.bench_with_input(BenchmarkId::new("random mu=5 d=2", n), &space, |b, s| {
            b.iter(|| max_disjoint_dense(black_box(s)).unwrap())
        });
    }
    let product = TraceSpace::new(product_family(0, 3, 3).unwrap(), 2, 1).unwrap();
    g.bench_function("product mu=3 t=3 d=2", |b| b.iter(|| max_disjoint_dense(black_box(&product)).unwrap()));
    g.finish();
}

fn almost(c: &mut Criterion) {
    let space = TraceSpace::new(small_family(3, 8, 3), 1, 1).unwrap();
    c.bench_function("max_almost_disjoint_dense n=8 cap=4", |b| {
        b.iter(|| max_almost_disjoint_dense(black_box(&space), 1, 4, None).unwrap())
    });
}

fn delta(c: &mut Criterion) {
    let mut rng = Rng::new(4);
    let mut fam = BTreeSet::new();
    while fam.len() < 49 {
        let mut s = BTreeSet::new();
        while s.len() < 3 {
            s.insert(rng.below(12) as u32);
        }
        fam.insert(s);
    }
    let sets: Vec<_> = fam.into_iter().collect();
    c.bench_function("find_delta_system 49 triples r=3", |b| {
        b.iter(|| find_delta_system(black_box(&sets), 3).unwrap())
    });
}

criterion_group!(benches, disjoint, almost, delta);
criterion_main!(benches);
