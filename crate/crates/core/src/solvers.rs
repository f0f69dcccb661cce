//! Exact resolvability numbers of small trace spaces.
//!
//! A set is dense iff it meets every inclusion-minimal nonempty basic open,
//! so both solvers work on the hypergraph of minimal traces encoded as
//! bitmasks. `k` pairwise disjoint dense sets are `k` disjoint transversals
//! of that hypergraph.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::independence::signature;
use crate::sets::PointSet;
use crate::space::{minimal_masks, TraceSpace};

/// Largest ground set the disjoint solver searches.
pub const EXACT_MAX_POINTS: usize = 24;
/// Largest ground set the almost-disjoint solver searches.
pub const ALMOST_MAX_POINTS: usize = 16;

/// A resolvability number with the dense sets witnessing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Resolution {
    pub count: usize,
    pub witness: Vec<PointSet>,
}

/// Nonempty traces of full-domain conditions: the classes of points with
/// equal side patterns, ordered by least point.
pub fn atoms(space: &TraceSpace) -> Vec<PointSet> {
    let family = space.family();
    let n = family.n();
    let mut groups: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut out: Vec<PointSet> = Vec::new();
    for p in 0..n {
        let slot = *groups.entry(signature(family, p)).or_insert_with(|| {
            out.push(PointSet::empty(n));
            out.len() - 1
        });
        out[slot].insert(p);
    }
    out
}

fn guard(space: &TraceSpace, limit: usize, what: &str) -> Result<()> {
    if space.n() > limit {
        return Err(Error::Capacity(format!(
            "{what} is exact only up to {limit} points, space has {}",
            space.n()
        )));
    }
    Ok(())
}

/// Distinct inclusion-minimal nonempty basic opens as bitmasks.
fn minimal_traces(space: &TraceSpace) -> Vec<u64> {
    let mut traces: Vec<u64> = Vec::new();
    for o in space.nonempty_opens() {
        let m = o.trace.to_mask();
        if !traces.contains(&m) {
            traces.push(m);
        }
    }
    minimal_masks(&traces)
}

struct Transversals {
    edges: Vec<u64>,
    /// Points ordered by how few minimal traces contain them, then by index.
    order: Vec<usize>,
}

impl Transversals {
    fn new(space: &TraceSpace) -> Self {
        let edges = minimal_traces(space);
        let degree = |p: usize| edges.iter().filter(|&&e| e >> p & 1 == 1).count();
        let mut order: Vec<usize> = (0..space.n()).collect();
        order.sort_by_key(|&p| (degree(p), p));
        Transversals { edges, order }
    }

    /// Tries to give every edge a point of each of the `classes.len()` classes.
    fn search(&self, classes: &mut [u64], assigned: u64) -> bool {
        let mut pick: Option<(usize, u64)> = None;
        let mut best_slack = usize::MAX;
        for &e in &self.edges {
            let missing = classes.iter().filter(|&&c| c & e == 0).count();
            if missing == 0 {
                continue;
            }
            let avail = (e & !assigned).count_ones() as usize;
            if avail < missing {
                return false;
            }
            if avail - missing < best_slack {
                best_slack = avail - missing;
                pick = Some((classes.iter().position(|&c| c & e == 0).expect("missing > 0"), e));
            }
        }
        let Some((class, edge)) = pick else {
            return true;
        };
        let free = edge & !assigned;
        for &p in &self.order {
            if free >> p & 1 == 0 {
                continue;
            }
            classes[class] |= 1 << p;
            if self.search(classes, assigned | 1 << p) {
                return true;
            }
            classes[class] &= !(1 << p);
        }
        false
    }

    fn disjoint_dense(&self, k: usize) -> Option<Vec<u64>> {
        let mut classes = vec![0u64; k];
        self.search(&mut classes, 0).then_some(classes)
    }
}

/// Largest number of pairwise disjoint dense sets, found by branch and bound
/// over assignments of points to classes: repeatedly take the minimal trace
/// with the least slack (free points minus classes it still lacks) and branch
/// on which free point supplies its lowest missing class.
pub fn max_disjoint_dense(space: &TraceSpace) -> Result<Resolution> {
    guard(space, EXACT_MAX_POINTS, "max_disjoint_dense")?;
    let n = space.n();
    let solver = Transversals::new(space);
    let upper = space.dispersion();
    let mut best = solver
        .disjoint_dense(1)
        .expect("the ground set is dense");
    for k in 2..=upper {
        match solver.disjoint_dense(k) {
            Some(classes) => best = classes,
            None => break,
        }
    }
    Ok(Resolution {
        count: best.len(),
        witness: best.into_iter().map(|m| PointSet::from_mask(n, m)).collect(),
    })
}

/// Is the space Δ-resolvable, with Δ its dispersion?
pub fn is_maximally_resolvable(space: &TraceSpace) -> Result<bool> {
    Ok(max_disjoint_dense(space)?.count >= space.dispersion())
}

/// Largest `k <= cap` such that some `k` distinct dense sets have pairwise
/// intersections nowhere dense with extension budget `budget`.
///
/// A validated `seed` family is used as a lower bound; if it already has
/// `cap` members no search is run, so large spaces can be certified this way.
/// Otherwise dense sets are enumerated (ground sets up to
/// [`ALMOST_MAX_POINTS`]) in order of size then bitmask, and a clique search
/// over "intersection is nowhere dense" runs with memoised checks.
pub fn max_almost_disjoint_dense(
    space: &TraceSpace,
    budget: usize,
    cap: usize,
    seed: Option<&[PointSet]>,
) -> Result<Resolution> {
    if cap == 0 {
        return Err(Error::Precondition("cap must be at least 1".into()));
    }
    let mut best: Vec<PointSet> = Vec::new();
    if let Some(seed) = seed {
        validate_almost_family(space, budget, seed)?;
        best = seed.iter().take(cap).cloned().collect();
        if best.len() == cap {
            return Ok(Resolution { count: cap, witness: best });
        }
    }
    guard(space, ALMOST_MAX_POINTS, "max_almost_disjoint_dense")?;
    // surfaces budget errors before the search
    space.nowhere_dense(&PointSet::empty(space.n()), budget)?;
    let n = space.n();
    let edges = minimal_traces(space);
    let mut dense: Vec<u64> = (0..1u64 << n)
        .filter(|&f| edges.iter().all(|&e| e & f != 0))
        .collect();
    dense.sort_by_key(|&f| (f.count_ones(), f));

    let mut search = AlmostSearch {
        space,
        budget,
        cap,
        dense: &dense,
        memo: HashMap::new(),
        best: best.iter().map(PointSet::to_mask).collect(),
    };
    let all: Vec<usize> = (0..dense.len()).collect();
    search.grow(&mut Vec::new(), &all)?;
    Ok(Resolution {
        count: search.best.len(),
        witness: search.best.iter().map(|&m| PointSet::from_mask(n, m)).collect(),
    })
}

struct AlmostSearch<'a> {
    space: &'a TraceSpace,
    budget: usize,
    cap: usize,
    dense: &'a [u64],
    memo: HashMap<u64, bool>,
    best: Vec<u64>,
}

impl AlmostSearch<'_> {
    fn compatible(&mut self, a: u64, b: u64) -> Result<bool> {
        let meet = a & b;
        if let Some(&v) = self.memo.get(&meet) {
            return Ok(v);
        }
        let v = self
            .space
            .nowhere_dense(&PointSet::from_mask(self.space.n(), meet), self.budget)?;
        self.memo.insert(meet, v);
        Ok(v)
    }

    /// Returns true once a family of size `cap` is recorded.
    fn grow(&mut self, chosen: &mut Vec<usize>, cands: &[usize]) -> Result<bool> {
        if chosen.len() > self.best.len() {
            self.best = chosen.iter().map(|&i| self.dense[i]).collect();
        }
        if self.best.len() >= self.cap {
            return Ok(true);
        }
        if chosen.len() + cands.len() <= self.best.len() {
            return Ok(false);
        }
        for (k, &c) in cands.iter().enumerate() {
            if chosen.len() + cands.len() - k <= self.best.len() {
                break;
            }
            let mut next = Vec::new();
            for &x in &cands[k + 1..] {
                if self.compatible(self.dense[c], self.dense[x])? {
                    next.push(x);
                }
            }
            chosen.push(c);
            let done = self.grow(chosen, &next)?;
            chosen.pop();
            if done {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Checks a family of distinct dense sets with pairwise nowhere dense
/// intersections.
pub fn validate_almost_family(space: &TraceSpace, budget: usize, family: &[PointSet]) -> Result<()> {
    for (i, f) in family.iter().enumerate() {
        let v = space.is_dense(f);
        if !v.holds {
            return Err(Error::Precondition(format!(
                "member {i} is not dense: misses {}",
                v.failing.expect("failing condition")
            )));
        }
        for (j, g) in family.iter().enumerate().skip(i + 1) {
            if f == g {
                return Err(Error::Precondition(format!("members {i} and {j} coincide")));
            }
            if !space.nowhere_dense(&(f & g), budget)? {
                return Err(Error::Precondition(format!(
                    "intersection of members {i} and {j} is not nowhere dense"
                )));
            }
        }
    }
    Ok(())
}
