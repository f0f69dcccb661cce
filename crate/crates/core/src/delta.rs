//! Δ-systems (sunflowers) among finite sets, and compatible pairs among
//! conditions.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sets::{Condition, PointSet};

/// Most sets `find_delta_system` accepts.
pub const DELTA_MAX_SETS: usize = 64;
/// Largest member size `find_delta_system` accepts.
pub const DELTA_MAX_SET_SIZE: usize = 8;

/// Members at `petals` pairwise intersect in exactly `core`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sunflower {
    pub core: BTreeSet<u32>,
    pub petals: Vec<usize>,
}

impl Sunflower {
    /// Checks the pairwise-intersection law against `sets`.
    pub fn is_valid_for(&self, sets: &[BTreeSet<u32>]) -> bool {
        self.petals.iter().enumerate().all(|(x, &i)| {
            self.petals[x + 1..].iter().all(|&j| {
                i != j
                    && sets[i]
                        .intersection(&sets[j])
                        .copied()
                        .collect::<BTreeSet<_>>()
                        == self.core
            })
        })
    }
}

/// Finds a Δ-system with at least `r` members, if one exists.
///
/// Any core of a sunflower with two or more petals is the intersection of two
/// of its members, so the candidate cores are the pairwise intersections,
/// tried in ascending order. For a core `K`, the members containing `K` with
/// pairwise disjoint remainders are searched depth-first in index order; the
/// first `r` found are then greedily extended by later indices.
pub fn find_delta_system(sets: &[BTreeSet<u32>], r: usize) -> Result<Option<Sunflower>> {
    if r < 2 {
        return Err(Error::Precondition(format!("sunflower size must be at least 2, got {r}")));
    }
    if sets.len() > DELTA_MAX_SETS {
        return Err(Error::Capacity(format!(
            "{} sets exceed the Δ-system search limit of {DELTA_MAX_SETS}",
            sets.len()
        )));
    }
    if let Some(big) = sets.iter().find(|s| s.len() > DELTA_MAX_SET_SIZE) {
        return Err(Error::Capacity(format!(
            "set of size {} exceeds the Δ-system member limit of {DELTA_MAX_SET_SIZE}",
            big.len()
        )));
    }
    // compress the element universe so remainders fit a bitset
    let universe: BTreeMap<u32, usize> = sets
        .iter()
        .flatten()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .enumerate()
        .map(|(i, x)| (x, i))
        .collect();
    let width = universe.len().max(1);
    let encode = |s: &BTreeSet<u32>| {
        PointSet::from_points(width, s.iter().map(|x| universe[x])).expect("encoded within universe")
    };
    let encoded: Vec<PointSet> = sets.iter().map(encode).collect();

    let mut cores = BTreeSet::new();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            cores.insert(sets[i].intersection(&sets[j]).copied().collect::<Vec<u32>>());
        }
    }
    let mut cores: Vec<Vec<u32>> = cores.into_iter().collect();
    cores.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));

    for core in cores {
        let core_set: BTreeSet<u32> = core.into_iter().collect();
        let core_bits = encode(&core_set);
        let candidates: Vec<(usize, PointSet)> = encoded
            .iter()
            .enumerate()
            .filter(|(_, s)| core_bits.is_subset(s))
            .map(|(i, s)| (i, s - &core_bits))
            .collect();
        if candidates.len() < r {
            continue;
        }
        let mut chosen = Vec::new();
        let mut used = PointSet::empty(width);
        if pack(&candidates, 0, r, &mut chosen, &mut used) {
            let last = *chosen.last().expect("r >= 2");
            for (pos, (_, petal)) in candidates.iter().enumerate().skip(last + 1) {
                if petal.is_disjoint(&used) {
                    used.union_with(petal);
                    chosen.push(pos);
                }
            }
            return Ok(Some(Sunflower {
                core: core_set,
                petals: chosen.into_iter().map(|p| candidates[p].0).collect(),
            }));
        }
    }
    Ok(None)
}

/// Chooses `need` more candidates at positions `>= from` whose petals are
/// disjoint from `used` and from each other.
fn pack(cands: &[(usize, PointSet)], from: usize, need: usize, chosen: &mut Vec<usize>, used: &mut PointSet) -> bool {
    if need == 0 {
        return true;
    }
    if cands.len() - from < need {
        return false;
    }
    for pos in from..cands.len() {
        let petal = &cands[pos].1;
        if !petal.is_disjoint(used) {
            continue;
        }
        let before = used.clone();
        used.union_with(petal);
        chosen.push(pos);
        if pack(cands, pos + 1, need - 1, chosen, used) {
            return true;
        }
        chosen.pop();
        *used = before;
    }
    false
}

/// The first pair `(i, j)`, `i < j`, in lexicographic order whose
/// conditions agree on every shared label.
pub fn find_compatible_pair(conds: &[Condition]) -> Option<(usize, usize)> {
    (0..conds.len()).find_map(|i| {
        (i + 1..conds.len())
            .find(|&j| conds[i].compatible(&conds[j]).is_some())
            .map(|j| (i, j))
    })
}
