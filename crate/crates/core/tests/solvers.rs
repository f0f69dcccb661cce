mod common;

use common::*;
use resolab_core::rng::Rng;
use resolab_core::solvers::{
    atoms, is_maximally_resolvable, max_almost_disjoint_dense, max_disjoint_dense,
    validate_almost_family,
};
use resolab_core::{PointSet, TraceSpace};

fn instance(seed: u64) -> (usize, TraceSpace) {
    let mut rng = Rng::new(seed);
    let n = 2 + rng.below(9) as usize;
    let mu = 1 + rng.below(4) as usize;
    let f = small_family(&mut rng, n, mu);
    (n, TraceSpace::new(f, mu, 1).unwrap())
}

#[test]
fn disjoint_solver_matches_set_partition_oracle() {
    let mut counts = std::collections::BTreeSet::new();
    for seed in 0..100 {
        let (n, space) = instance(seed);
        let opens = naive_opens(space.family(), space.depth());
        let got = max_disjoint_dense(&space).unwrap();
        assert_eq!(got.count, brute_max_disjoint(n, &opens), "seed {seed}");
        counts.insert(got.count);
    }
    // the sample is not degenerate
    assert!(counts.len() >= 3, "{counts:?}");
}

#[test]
fn witnesses_verify_post_hoc() {
    for seed in 0..60 {
        let (_, space) = instance(seed);
        let r = max_disjoint_dense(&space).unwrap();
        assert_eq!(r.witness.len(), r.count);
        for (i, w) in r.witness.iter().enumerate() {
            assert!(space.is_dense(w).holds, "seed {seed}");
            for v in &r.witness[i + 1..] {
                assert!(w.is_disjoint(v), "seed {seed}");
            }
        }
        assert!(r.count <= space.dispersion());
    }
}

#[test]
fn maximal_resolvability_is_the_composition_of_base_ops() {
    for seed in 0..60 {
        let (_, space) = instance(seed);
        let expected = max_disjoint_dense(&space).unwrap().count >= space.dispersion();
        assert_eq!(is_maximally_resolvable(&space).unwrap(), expected);
    }
}

#[test]
fn deepening_never_increases_resolvability() {
    for seed in 0..60 {
        let (_, full) = instance(seed);
        let f = full.family().clone();
        let mut prev = usize::MAX;
        for d in 1..=f.len() {
            let k = max_disjoint_dense(&TraceSpace::new(f.clone(), d, 1).unwrap()).unwrap().count;
            assert!(k <= prev, "seed {seed} depth {d}");
            prev = k;
        }
    }
}

#[test]
fn coarsening_never_decreases_resolvability() {
    for seed in 0..50 {
        let (_, space) = instance(seed + 1000);
        let f = space.family();
        let base = max_disjoint_dense(&space).unwrap().count;
        for drop in 0..f.len() {
            let coarse = f.without_positions(&[drop]);
            if coarse.is_empty() {
                continue;
            }
            let d = space.depth().min(coarse.len());
            let k = max_disjoint_dense(&TraceSpace::new(coarse, d, 1).unwrap()).unwrap().count;
            assert!(k >= base, "seed {seed} dropping {drop}");
        }
    }
}

#[test]
fn atoms_partition_the_ground_set() {
    for seed in 0..60 {
        let (n, space) = instance(seed);
        let a = atoms(&space);
        let mut union = PointSet::empty(n);
        for (i, x) in a.iter().enumerate() {
            assert!(!x.is_empty());
            assert!(x.is_disjoint(&union));
            union.union_with(x);
            if i > 0 {
                assert!(a[i - 1].first() < x.first());
            }
        }
        assert_eq!(union, PointSet::full(n));
        // full-depth nonempty traces are exactly the atoms
        let full = TraceSpace::new(space.family().clone(), space.family().len(), 1).unwrap();
        let min = full.dispersion();
        assert_eq!(min, a.iter().map(PointSet::len).min().unwrap());
    }
}

/// Largest `k <= cap` of distinct dense sets with pairwise nowhere dense
/// intersections, by trying every subset of dense sets.
fn brute_almost(space: &TraceSpace, budget: usize, cap: usize) -> usize {
    let n = space.n();
    let opens = naive_opens(space.family(), space.depth());
    let dense: Vec<u64> = (0..1u64 << n).filter(|&f| naive_dense(&opens, f)).collect();
    let ok = |a: u64, b: u64| space.nowhere_dense(&PointSet::from_mask(n, a & b), budget).unwrap();
    let mut best = 0;
    fn rec(dense: &[u64], i: usize, chosen: &mut Vec<u64>, cap: usize, ok: &dyn Fn(u64, u64) -> bool, best: &mut usize) {
        *best = (*best).max(chosen.len());
        if chosen.len() == cap || *best == cap {
            return;
        }
        for j in i..dense.len() {
            if chosen.iter().all(|&c| ok(c, dense[j])) {
                chosen.push(dense[j]);
                rec(dense, j + 1, chosen, cap, ok, best);
                chosen.pop();
            }
        }
    }
    rec(&dense, 0, &mut Vec::new(), cap, &ok, &mut best);
    best
}

#[test]
fn almost_solver_matches_subset_oracle() {
    let mut checked = 0;
    for seed in 0..200 {
        let mut rng = Rng::new(seed);
        let n = 3 + rng.below(3) as usize;
        let mu = 2 + rng.below(2) as usize;
        let f = small_family(&mut rng, n, mu);
        let space = TraceSpace::new(f, 1, 1).unwrap();
        if space.nowhere_dense(&PointSet::empty(n), 1).is_err() {
            continue;
        }
        let cap = 4;
        let got = max_almost_disjoint_dense(&space, 1, cap, None).unwrap();
        assert_eq!(got.count, brute_almost(&space, 1, cap), "seed {seed}");
        validate_almost_family(&space, 1, &got.witness).unwrap();
        assert!(got.count >= max_disjoint_dense(&space).unwrap().count.min(cap));
        checked += 1;
    }
    assert!(checked > 100);
}
