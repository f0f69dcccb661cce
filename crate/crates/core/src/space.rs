//! Bounded-depth trace spaces.
//!
//! A [`TraceSpace`] takes the traces of all conditions of depth `<= d` over
//! its family as the basic open sets. Density, nowhere density (with an
//! explicit extension budget), dispersion, mosaics and forcedness are all
//! decided against that collection. Every predicate reports the canonical
//! least failing condition, so verdicts do not depend on scan order.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sets::{
    count_conditions, enumerate_conditions, Condition, ConditionIter, Literal, PartitionFamily,
    PointSet, ENUMERATION_LIMIT,
};

/// Upper bound on the words held by the cached basic opens of one space.
const OPEN_CACHE_WORDS: u128 = 1 << 26;

/// Largest ground set for which `is_d_forced` will enumerate subsets.
pub const FORCED_MAX_POINTS: usize = 20;

/// Outcome of a predicate, with the least failing condition when it fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub failing: Option<Condition>,
}

impl Verdict {
    pub fn pass() -> Self {
        Verdict {
            holds: true,
            failing: None,
        }
    }

    pub fn fail(at: Condition) -> Self {
        Verdict {
            holds: false,
            failing: Some(at),
        }
    }
}

/// A basic open set: a condition and its (possibly empty) trace.
#[derive(Clone, Debug)]
pub struct BasicOpen {
    pub lits: Vec<Literal>,
    pub trace: PointSet,
}

#[derive(Clone, Debug)]
pub struct TraceSpace {
    family: PartitionFamily,
    depth: usize,
    threshold: usize,
    opens: Vec<BasicOpen>,
}

/// For each nonempty basic open `base`, an extension whose trace is nonempty
/// and misses the tested set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NwdWitness {
    pub base: Condition,
    pub extension: Condition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NwdVerdict {
    pub holds: bool,
    pub failing: Option<Condition>,
    pub witnesses: Vec<NwdWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MosaicPiece {
    pub condition: Condition,
    pub dense_id: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mosaic {
    pub pieces: Vec<MosaicPiece>,
    pub maximal: bool,
    /// When not maximal: the least nonempty basic open missing every piece.
    pub extension: Option<Condition>,
}

/// A pair of conditions whose joint trace generates a dense set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GeneratorPair {
    /// Over the D-block.
    pub phi: Condition,
    /// Over the C-block.
    pub eps: Condition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ForcedVerdict {
    pub holds: bool,
    /// A dense set including no mosaic, when the space is not forced.
    pub counterexample: Option<PointSet>,
}

impl TraceSpace {
    pub fn new(family: PartitionFamily, depth: usize, threshold: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::Precondition("depth must be at least 1".into()));
        }
        if threshold == 0 {
            return Err(Error::Precondition("threshold must be at least 1".into()));
        }
        if depth > family.len() {
            return Err(Error::Precondition(format!(
                "depth {depth} exceeds the {} partitions of the family",
                family.len()
            )));
        }
        let count = count_conditions(family.len(), depth);
        let words = family.n().div_ceil(64) as u128;
        if count * words > OPEN_CACHE_WORDS {
            return Err(Error::Capacity(format!(
                "{count} basic opens over {} points exceed the trace cache",
                family.n()
            )));
        }
        let all: Vec<usize> = (0..family.len()).collect();
        let opens = enumerate_conditions(&all, depth, ENUMERATION_LIMIT)?
            .into_par_iter()
            .map(|lits| {
                let trace = family.trace_lits(&lits);
                BasicOpen { lits, trace }
            })
            .collect();
        Ok(TraceSpace {
            family,
            depth,
            threshold,
            opens,
        })
    }

    pub fn family(&self) -> &PartitionFamily {
        &self.family
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn n(&self) -> usize {
        self.family.n()
    }

    /// All basic opens in canonical order, empty traces included.
    pub fn basic_opens(&self) -> &[BasicOpen] {
        &self.opens
    }

    pub fn nonempty_opens(&self) -> impl Iterator<Item = &BasicOpen> {
        self.opens.iter().filter(|o| !o.trace.is_empty())
    }

    pub fn condition(&self, lits: &[Literal]) -> Condition {
        self.family.condition_of(lits)
    }

    fn check_universe(&self, s: &PointSet) {
        assert_eq!(s.universe(), self.n(), "point set over a different ground set");
    }

    fn first_open(&self, bad: impl Fn(&BasicOpen) -> bool + Sync) -> Verdict {
        match self.opens.par_iter().find_first(|o| bad(o)) {
            Some(o) => Verdict::fail(self.condition(&o.lits)),
            None => Verdict::pass(),
        }
    }

    /// Does `set` meet every nonempty basic open?
    pub fn is_dense(&self, set: &PointSet) -> Verdict {
        self.check_universe(set);
        self.first_open(|o| !o.trace.is_empty() && o.trace.is_disjoint(set))
    }

    /// Does `set` meet every nonempty basic open in at least `threshold` points?
    pub fn is_t_dense(&self, set: &PointSet) -> Verdict {
        self.check_universe(set);
        let t = self.threshold;
        self.first_open(|o| !o.trace.is_empty() && o.trace.intersection_len(set) < t)
    }

    /// Minimum size of a nonempty basic open.
    pub fn dispersion(&self) -> usize {
        self.nonempty_opens()
            .map(|o| o.trace.len())
            .min()
            .expect("the empty condition has the whole ground set as trace")
    }

    fn check_budget(&self, budget: usize) -> Result<()> {
        if self.depth + budget > self.family.len() {
            return Err(Error::Precondition(format!(
                "depth {} plus budget {budget} exceeds the {} partitions of the family",
                self.depth,
                self.family.len()
            )));
        }
        Ok(())
    }

    /// Least extension of `base` by at most `budget` literals whose trace is
    /// nonempty and disjoint from `set`.
    fn find_extension(&self, base: &BasicOpen, set: &PointSet, budget: usize) -> Option<Vec<Literal>> {
        let bound: Vec<usize> = base.lits.iter().map(|l| l.pos as usize).collect();
        let free: Vec<usize> = (0..self.family.len()).filter(|p| !bound.contains(p)).collect();
        let mut buf = PointSet::empty(self.n());
        for ext in ConditionIter::new(&free, budget) {
            self.family.trace_into(&ext, &mut buf);
            buf.intersect_with(&base.trace);
            if !buf.is_empty() && buf.is_disjoint(set) {
                let mut lits = base.lits.clone();
                lits.extend(ext);
                lits.sort_unstable();
                return Some(lits);
            }
        }
        None
    }

    /// Is `set` nowhere dense with extension budget `budget`: does every
    /// nonempty basic open have an extension by at most `budget` literals
    /// with nonempty trace disjoint from `set`? On success the witness map
    /// lists one extension per nonempty basic open, in canonical order.
    pub fn is_nowhere_dense(&self, set: &PointSet, budget: usize) -> Result<NwdVerdict> {
        self.check_universe(set);
        self.check_budget(budget)?;
        let found: Vec<(usize, Option<Vec<Literal>>)> = self
            .opens
            .par_iter()
            .enumerate()
            .filter(|(_, o)| !o.trace.is_empty())
            .map(|(i, o)| (i, self.find_extension(o, set, budget)))
            .collect();
        if let Some((i, _)) = found.iter().find(|(_, ext)| ext.is_none()) {
            return Ok(NwdVerdict {
                holds: false,
                failing: Some(self.condition(&self.opens[*i].lits)),
                witnesses: Vec::new(),
            });
        }
        let witnesses = found
            .into_iter()
            .map(|(i, ext)| NwdWitness {
                base: self.condition(&self.opens[i].lits),
                extension: self.condition(&ext.expect("checked above")),
            })
            .collect();
        Ok(NwdVerdict {
            holds: true,
            failing: None,
            witnesses,
        })
    }

    /// Yes/no form of [`is_nowhere_dense`](Self::is_nowhere_dense) that skips
    /// collecting witnesses.
    pub fn nowhere_dense(&self, set: &PointSet, budget: usize) -> Result<bool> {
        self.check_universe(set);
        self.check_budget(budget)?;
        Ok(self
            .opens
            .iter()
            .filter(|o| !o.trace.is_empty())
            .all(|o| self.find_extension(o, set, budget).is_some()))
    }

    /// Replays a witness map: it must cover every nonempty basic open, and
    /// each extension must contain its base, stay within `depth + budget`,
    /// and have a nonempty trace disjoint from `set`.
    pub fn check_nwd_witnesses(&self, set: &PointSet, budget: usize, witnesses: &[NwdWitness]) -> Result<Verdict> {
        self.check_universe(set);
        self.check_budget(budget)?;
        let by_base: BTreeMap<&Condition, &Condition> =
            witnesses.iter().map(|w| (&w.base, &w.extension)).collect();
        for o in self.nonempty_opens() {
            let base = self.condition(&o.lits);
            let ok = match by_base.get(&base) {
                None => false,
                Some(ext) => {
                    ext.depth() <= self.depth + budget
                        && base.is_sub_condition_of(ext)
                        && match self.family.evaluate_trace(ext) {
                            Ok(tr) => !tr.is_empty() && tr.is_disjoint(set),
                            Err(_) => false,
                        }
                }
            };
            if !ok {
                return Ok(Verdict::fail(base));
            }
        }
        Ok(Verdict::pass())
    }

    /// Validates a mosaic assignment and decides maximality by sweeping the
    /// basic opens in canonical order for one disjoint from every piece.
    pub fn build_mosaic(&self, assignment: Vec<(Condition, String)>) -> Result<Mosaic> {
        let mut traces = Vec::with_capacity(assignment.len());
        for (cond, _) in &assignment {
            if cond.depth() > self.depth {
                return Err(Error::Precondition(format!(
                    "mosaic piece {cond} is deeper than {}",
                    self.depth
                )));
            }
            let tr = self.family.evaluate_trace(cond)?;
            if tr.is_empty() {
                return Err(Error::Precondition(format!("mosaic piece {cond} has an empty trace")));
            }
            traces.push(tr);
        }
        for i in 0..traces.len() {
            for j in i + 1..traces.len() {
                if traces[i].intersects(&traces[j]) {
                    return Err(Error::MosaicOverlap { first: i, second: j });
                }
            }
        }
        let extension = self
            .nonempty_opens()
            .find(|o| traces.iter().all(|t| t.is_disjoint(&o.trace)))
            .map(|o| self.condition(&o.lits));
        Ok(Mosaic {
            pieces: assignment
                .into_iter()
                .map(|(condition, dense_id)| MosaicPiece { condition, dense_id })
                .collect(),
            maximal: extension.is_none(),
            extension,
        })
    }

    /// Union over the pieces of trace ∩ assigned dense set.
    pub fn mosaic_union(&self, mosaic: &Mosaic, dense_sets: &BTreeMap<String, PointSet>) -> Result<PointSet> {
        let mut out = PointSet::empty(self.n());
        for piece in &mosaic.pieces {
            let d = dense_sets
                .get(&piece.dense_id)
                .ok_or_else(|| Error::UnresolvedId(piece.dense_id.clone()))?;
            let mut tr = self.family.evaluate_trace(&piece.condition)?;
            tr.intersect_with(d);
            out.union_with(&tr);
        }
        Ok(out)
    }

    /// Searches, in canonical order over this space's partitions followed by
    /// `d_block`, for conditions of combined depth `<= max_depth` whose joint
    /// trace is nonempty and inside `set`. `set` must be dense.
    pub fn is_weakly_forced(
        &self,
        d_block: &PartitionFamily,
        set: &PointSet,
        max_depth: usize,
    ) -> Result<Option<GeneratorPair>> {
        let joint = self.joint_family(d_block, set)?;
        let all: Vec<usize> = (0..joint.len()).collect();
        let mut buf = PointSet::empty(self.n());
        for lits in ConditionIter::new(&all, max_depth) {
            joint.trace_into(&lits, &mut buf);
            if !buf.is_empty() && buf.is_subset(set) {
                return Ok(Some(self.split_generator(&joint, &lits)));
            }
        }
        Ok(None)
    }

    /// Index of the first candidate pair whose joint trace is nonempty and
    /// inside `set`. `set` must be dense.
    pub fn weakly_forced_among(
        &self,
        d_block: &PartitionFamily,
        candidates: &[GeneratorPair],
        set: &PointSet,
    ) -> Result<Option<usize>> {
        let joint = self.joint_family(d_block, set)?;
        for (i, g) in candidates.iter().enumerate() {
            let cond = g
                .phi
                .compatible(&g.eps)
                .ok_or_else(|| Error::Precondition("generator halves share a label".into()))?;
            let tr = joint.evaluate_trace(&cond)?;
            if !tr.is_empty() && tr.is_subset(set) {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    fn joint_family(&self, d_block: &PartitionFamily, set: &PointSet) -> Result<PartitionFamily> {
        let dense = self.is_dense(set);
        if !dense.holds {
            return Err(Error::Precondition(format!(
                "set is not dense: misses the trace of {}",
                dense.failing.expect("failing condition on a negative verdict")
            )));
        }
        self.family.concat(d_block)
    }

    fn split_generator(&self, joint: &PartitionFamily, lits: &[Literal]) -> GeneratorPair {
        let c_len = self.family.len() as u32;
        let (eps, phi): (Vec<Literal>, Vec<Literal>) = lits.iter().partition(|l| l.pos < c_len);
        GeneratorPair {
            phi: joint.condition_of(&phi),
            eps: joint.condition_of(&eps),
        }
    }

    /// Does every dense subset include a mosaic over `collection`? Exhaustive
    /// over subsets of the ground set, so limited to
    /// [`FORCED_MAX_POINTS`] points.
    pub fn is_d_forced(&self, collection: &[PointSet]) -> Result<ForcedVerdict> {
        let n = self.n();
        if n > FORCED_MAX_POINTS {
            return Err(Error::Capacity(format!(
                "forcedness check enumerates 2^{n} subsets; limit is {FORCED_MAX_POINTS} points"
            )));
        }
        let mut traces: Vec<u64> = Vec::new();
        for o in self.nonempty_opens() {
            let m = o.trace.to_mask();
            if !traces.contains(&m) {
                traces.push(m);
            }
        }
        let minimal = minimal_masks(&traces);
        let pieces: Vec<u64> = collection.iter().map(|d| d.to_mask()).collect();
        let full = (1u64 << n) - 1;
        let dense = |f: u64| minimal.iter().all(|&t| t & f != 0);
        for f in 0..=full {
            if !dense(f) {
                continue;
            }
            let is_minimal = (0..n).all(|p| f >> p & 1 == 0 || !dense(f & !(1 << p)));
            if !is_minimal {
                continue;
            }
            // traces that admit an assigned set landing inside f
            let good: Vec<u64> = traces
                .iter()
                .copied()
                .filter(|&v| pieces.iter().any(|&d| v & d & !f == 0))
                .collect();
            if !extends_to_maximal(&traces, &good, 0) {
                return Ok(ForcedVerdict {
                    holds: false,
                    counterexample: Some(PointSet::from_mask(n, f)),
                });
            }
        }
        Ok(ForcedVerdict {
            holds: true,
            counterexample: None,
        })
    }
}

/// Inclusion-minimal members of `sets`, in input order.
pub(crate) fn minimal_masks(sets: &[u64]) -> Vec<u64> {
    sets.iter()
        .copied()
        .filter(|&s| !sets.iter().any(|&o| o != s && o & !s == 0))
        .collect()
}

/// Can the disjoint family whose union is `covered` be extended, using only
/// `good` traces, until every trace meets it? The first unmet trace must be
/// met by some chosen piece, which makes the branching complete.
fn extends_to_maximal(traces: &[u64], good: &[u64], covered: u64) -> bool {
    let Some(&unmet) = traces.iter().find(|&&w| w & covered == 0) else {
        return true;
    };
    good.iter()
        .filter(|&&v| v & unmet != 0 && v & covered == 0)
        .any(|&v| extends_to_maximal(traces, good, covered | v))
}
