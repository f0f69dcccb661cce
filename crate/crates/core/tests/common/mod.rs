#![allow(dead_code)]

use resolab_core::rng::Rng;
use resolab_core::sets::{Block, GroundSet, PartitionFamily, PointSet};
use resolab_core::Condition;

/// `mu` random partitions of `0..n` (n <= 64), labels `p0, p1, ...`.
pub fn small_family(rng: &mut Rng, n: usize, mu: usize) -> PartitionFamily {
    let mut f = PartitionFamily::new(GroundSet::new(n).unwrap());
    for i in 0..mu {
        let side0 = PointSet::from_mask(n, rng.next_u64() & low_mask(n));
        f.push_side0(format!("p{i}"), Block::Other, side0).unwrap();
    }
    f
}

pub fn family_from_masks(n: usize, masks: &[u64]) -> PartitionFamily {
    let mut f = PartitionFamily::new(GroundSet::new(n).unwrap());
    for (i, &m) in masks.iter().enumerate() {
        f.push_side0(format!("p{i}"), Block::Other, PointSet::from_mask(n, m & low_mask(n)))
            .unwrap();
    }
    f
}

pub fn low_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Points whose side of every bound partition matches the condition,
/// evaluated point by point.
pub fn naive_trace(family: &PartitionFamily, cond: &Condition) -> Vec<usize> {
    (0..family.n())
        .filter(|&p| {
            cond.iter()
                .all(|(label, side)| family.get(label).unwrap().side0().contains(p) != side)
        })
        .collect()
}

/// Every condition over `family` with at most `depth` bound labels, as
/// assignments `None | Some(side)` per partition.
pub fn all_conditions(family: &PartitionFamily, depth: usize) -> Vec<Condition> {
    let labels: Vec<String> = family.labels().map(str::to_string).collect();
    let mut out = Vec::new();
    let mut cur: Vec<(String, u8)> = Vec::new();
    fn rec(labels: &[String], i: usize, depth: usize, cur: &mut Vec<(String, u8)>, out: &mut Vec<Condition>) {
        if i == labels.len() {
            out.push(Condition::from_pairs(cur.iter().cloned()).unwrap());
            return;
        }
        rec(labels, i + 1, depth, cur, out);
        if cur.len() < depth {
            for v in 0..2 {
                cur.push((labels[i].clone(), v));
                rec(labels, i + 1, depth, cur, out);
                cur.pop();
            }
        }
    }
    rec(&labels, 0, depth, &mut cur, &mut out);
    out
}

/// Nonempty naive traces of depth <= `depth`, as bitmasks.
pub fn naive_opens(family: &PartitionFamily, depth: usize) -> Vec<u64> {
    all_conditions(family, depth)
        .iter()
        .map(|c| naive_trace(family, c).iter().fold(0u64, |m, &p| m | 1 << p))
        .filter(|&m| m != 0)
        .collect()
}

pub fn naive_dense(opens: &[u64], f: u64) -> bool {
    opens.iter().all(|&o| o & f != 0)
}

/// Largest number of dense blocks over all set partitions of `0..n`.
/// Leftover points can join any dense block, so partitions of the whole
/// ground set cover every family of pairwise disjoint dense sets.
pub fn brute_max_disjoint(n: usize, opens: &[u64]) -> usize {
    fn rec(p: usize, n: usize, blocks: &mut Vec<u64>, opens: &[u64], best: &mut usize) {
        if p == n {
            let k = blocks.iter().filter(|&&b| naive_dense(opens, b)).count();
            *best = (*best).max(k);
            return;
        }
        for i in 0..blocks.len() {
            blocks[i] |= 1 << p;
            rec(p + 1, n, blocks, opens, best);
            blocks[i] &= !(1 << p);
        }
        blocks.push(1 << p);
        rec(p + 1, n, blocks, opens, best);
        blocks.pop();
    }
    let mut best = 0;
    rec(0, n, &mut Vec::new(), opens, &mut best);
    best
}
