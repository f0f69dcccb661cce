//! Workload generators shared by the benchmarks.

use resolab_core::rng::Rng;
use resolab_core::sets::{Block, GroundSet, PartitionFamily};
use resolab_core::{Literal, PointSet};

/// `count` conditions over `mu` partitions, each of uniform depth in
/// `0..=max_depth` on distinct positions.
pub fn random_conditions(seed: u64, mu: usize, max_depth: usize, count: usize) -> Vec<Vec<Literal>> {
    let mut rng = Rng::new(seed);
    (0..count)
        .map(|_| {
            let depth = rng.below(max_depth as u64 + 1) as usize;
            let mut pos: Vec<usize> = Vec::with_capacity(depth);
            while pos.len() < depth {
                let p = rng.below(mu as u64) as usize;
                if !pos.contains(&p) {
                    pos.push(p);
                }
            }
            pos.into_iter().map(|p| Literal::new(p, rng.below(2) == 1)).collect()
        })
        .collect()
}

/// `mu` uniformly random partitions of `0..n`, `n <= 64`.
pub fn small_family(seed: u64, n: usize, mu: usize) -> PartitionFamily {
    let mut rng = Rng::new(seed);
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut f = PartitionFamily::new(GroundSet::new(n).expect("n >= 1"));
    for i in 0..mu {
        f.push_side0(format!("p{i}"), Block::Other, PointSet::from_mask(n, rng.next_u64() & mask))
            .expect("fresh labels");
    }
    f
}
