//! The pairwise E-partition refinement and verifiers for each step of its
//! correctness argument.
//!
//! Start from a C-block and a D-block over one ground set. The D-labels are
//! split into `I` (the candidate dense sets `D⁰_α`) and `J`; an injection `j`
//! sends each pair `a = {a⁻, a⁺} ⊆ I` and copy index `m < m_max` to a fresh
//! J-label. The E-partition for `(a, m)` has
//!
//! ```text
//! E⁰(a,m) = D⁰(j(a,m)) ∖ (D⁰(a⁻) ∩ D⁰(a⁺))      E¹(a,m) = complement
//! ```
//!
//! and the refined space is generated by `C ∪ E`. The verifiers check, on the
//! finite instance, that E-traces contain D-traces avoiding any chosen α, that
//! `C ∪ E` stays independent, that each `D⁰_α` is dense, that pairwise
//! intersections `D⁰_α ∩ D⁰_β` are nowhere dense with budget 1, and that
//! compatible generator pairs force dense sets to meet.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::delta::find_compatible_pair;
use crate::error::{Error, Result};
use crate::independence::{random_family, RandomDraw};
use crate::sets::{
    enumerate_conditions, Block, Condition, PartitionFamily, PointSet, TwoPartition,
    ENUMERATION_LIMIT,
};
use crate::space::{GeneratorPair, NwdWitness, TraceSpace, Verdict};

/// A pair from `I` (by position in `I`, `lo < hi`) and a copy index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EIndex {
    pub lo: usize,
    pub hi: usize,
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexSplit {
    pub i_labels: Vec<String>,
    pub j_labels: Vec<String>,
}

/// Injective map from [`EIndex`] into the J-labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Injection {
    map: BTreeMap<EIndex, String>,
}

impl Injection {
    pub fn get(&self, idx: EIndex) -> Option<&str> {
        self.map.get(&idx).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (EIndex, &str)> {
        self.map.iter().map(|(k, v)| (*k, v.as_str()))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Builds an injection from explicit assignments, checking injectivity.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (EIndex, String)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut seen = HashMap::new();
        for (idx, label) in pairs {
            if idx.lo >= idx.hi {
                return Err(Error::Precondition(format!("pair index {idx:?} must have lo < hi")));
            }
            if let Some(prev) = seen.insert(label.clone(), idx) {
                return Err(Error::Precondition(format!(
                    "label `{label}` assigned to both {prev:?} and {idx:?}"
                )));
            }
            map.insert(idx, label);
        }
        Ok(Injection { map })
    }
}

fn choose2(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

/// Splits the D-labels (in the given order) into `I` = the first `size_i`
/// and `J` = the rest, and maps the pairs of `I` with copy indices, in
/// lexicographic `(lo, hi, m)` order, onto the leading J-labels.
pub fn split_indices(d_labels: &[String], size_i: usize, m_max: usize) -> Result<(IndexSplit, Injection)> {
    if size_i < 2 {
        return Err(Error::Precondition(format!("|I| must be at least 2, got {size_i}")));
    }
    if m_max == 0 {
        return Err(Error::Precondition("m_max must be at least 1".into()));
    }
    let needed = size_i + choose2(size_i) * m_max;
    if d_labels.len() < needed {
        return Err(Error::Sizing(format!(
            "|I| = {size_i} with m_max = {m_max} needs {needed} D-labels ({} for I, {} for J), \
             only {} available: {} short",
            size_i,
            choose2(size_i) * m_max,
            d_labels.len(),
            needed - d_labels.len()
        )));
    }
    let split = IndexSplit {
        i_labels: d_labels[..size_i].to_vec(),
        j_labels: d_labels[size_i..].to_vec(),
    };
    let mut next = split.j_labels.iter();
    let mut pairs = Vec::new();
    for lo in 0..size_i {
        for hi in lo + 1..size_i {
            for m in 0..m_max {
                let label = next.next().expect("sized above").clone();
                pairs.push((EIndex { lo, hi, m }, label));
            }
        }
    }
    Ok((split, Injection::from_pairs(pairs)?))
}

/// The E-partition for `idx`; also asserts that side 1 equals
/// `D¹(j) ∪ (D⁰(a⁻) ∩ D⁰(a⁺))`.
pub fn build_e(idx: EIndex, split: &IndexSplit, d_block: &PartitionFamily, injection: &Injection) -> Result<TwoPartition> {
    let j = injection
        .get(idx)
        .ok_or_else(|| Error::Precondition(format!("injection undefined at {idx:?}")))?;
    let lo = split
        .i_labels
        .get(idx.lo)
        .ok_or_else(|| Error::Precondition(format!("no I-label at position {}", idx.lo)))?;
    let hi = split
        .i_labels
        .get(idx.hi)
        .ok_or_else(|| Error::Precondition(format!("no I-label at position {}", idx.hi)))?;
    let dj = d_block.get(j)?;
    let both = d_block.get(lo)?.side0() & d_block.get(hi)?.side0();
    let part = TwoPartition::from_side0(dj.side0() - &both);
    let displayed = dj.side1() | &both;
    if part.side1() != &displayed {
        return Err(Error::Invariant(format!("E-partition {idx:?}: complement identity fails")));
    }
    Ok(part)
}

/// The refinement data: blocks, split, injection and the E-block.
#[derive(Clone, Debug)]
pub struct Construction {
    c_block: PartitionFamily,
    d_block: PartitionFamily,
    split: IndexSplit,
    injection: Injection,
    m_max: usize,
    e_block: PartitionFamily,
    e_index: HashMap<String, EIndex>,
}

pub fn e_label(split: &IndexSplit, idx: EIndex) -> String {
    format!("e({},{})#{}", split.i_labels[idx.lo], split.i_labels[idx.hi], idx.m)
}

impl Construction {
    /// Canonical split and injection over the D-block in family order.
    pub fn new(c_block: PartitionFamily, d_block: PartitionFamily, size_i: usize, m_max: usize) -> Result<Self> {
        let labels: Vec<String> = d_block.labels().map(str::to_string).collect();
        let (split, injection) = split_indices(&labels, size_i, m_max)?;
        Construction::with_split(c_block, d_block, split, injection, m_max)
    }

    /// Uses a caller-supplied split and injection.
    pub fn with_split(
        c_block: PartitionFamily,
        d_block: PartitionFamily,
        split: IndexSplit,
        injection: Injection,
        m_max: usize,
    ) -> Result<Self> {
        if c_block.ground() != d_block.ground() {
            return Err(Error::GroundMismatch {
                expected: c_block.n(),
                found: d_block.n(),
            });
        }
        for label in split.i_labels.iter().chain(&split.j_labels) {
            d_block.get(label)?;
        }
        if split.i_labels.iter().any(|l| split.j_labels.contains(l)) {
            return Err(Error::Precondition("I and J overlap".into()));
        }
        let mut e_block = PartitionFamily::new(d_block.ground());
        let mut e_index = HashMap::new();
        for (idx, j) in injection.iter() {
            if !split.j_labels.iter().any(|l| l == j) {
                return Err(Error::Precondition(format!("injection target `{j}` is not in J")));
            }
            if idx.m >= m_max || idx.hi >= split.i_labels.len() {
                return Err(Error::Precondition(format!("injection index {idx:?} out of range")));
            }
            let label = e_label(&split, idx);
            e_block.push(label.clone(), Block::E, build_e(idx, &split, &d_block, &injection)?)?;
            e_index.insert(label, idx);
        }
        Ok(Construction {
            c_block,
            d_block,
            split,
            injection,
            m_max,
            e_block,
            e_index,
        })
    }

    pub fn c_block(&self) -> &PartitionFamily {
        &self.c_block
    }

    pub fn d_block(&self) -> &PartitionFamily {
        &self.d_block
    }

    pub fn e_block(&self) -> &PartitionFamily {
        &self.e_block
    }

    pub fn split(&self) -> &IndexSplit {
        &self.split
    }

    pub fn injection(&self) -> &Injection {
        &self.injection
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn e_index(&self, label: &str) -> Option<EIndex> {
        self.e_index.get(label).copied()
    }

    /// `D⁰_α` for an I-label α.
    pub fn candidate(&self, alpha: &str) -> Result<&PointSet> {
        Ok(self.d_block.get(alpha)?.side0())
    }

    fn alpha_pos(&self, alpha: &str) -> Result<usize> {
        self.split
            .i_labels
            .iter()
            .position(|l| l == alpha)
            .ok_or_else(|| Error::Precondition(format!("`{alpha}` is not an I-label")))
    }

    /// The space generated by `C ∪ E` with depth `depth` and threshold `t`.
    pub fn assemble_space(&self, depth: usize, threshold: usize) -> Result<TraceSpace> {
        assemble_space(&self.c_block, &self.e_block, depth, threshold)
    }

    /// A D-condition `φ` with `α ∉ dom φ` and `E[η] ⊇ D[φ]`: `φ` copies
    /// `η(a,m)` onto `j(a,m)`, and for every pair `a` with some `η(a,m) = 0`
    /// binds `a* ↦ 1`, where `a*` is the least element of `a ∖ {α}`.
    pub fn claim1_witness(&self, eta: &Condition, alpha: &str) -> Result<Condition> {
        let alpha_pos = self.alpha_pos(alpha)?;
        let mut phi = Condition::new();
        let mut star_pairs = Vec::new();
        for (label, side) in eta.iter() {
            let idx = self
                .e_index(label)
                .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
            let j = self.injection.get(idx).expect("every E-label has a j-image");
            phi = phi.extend(j, side).map_err(|_| {
                Error::Invariant(format!("j-label `{j}` bound twice while reducing {eta}"))
            })?;
            if !side {
                star_pairs.push(idx);
            }
        }
        for idx in star_pairs {
            let star = if idx.lo != alpha_pos { idx.lo } else { idx.hi };
            let star_label = &self.split.i_labels[star];
            match phi.get(star_label) {
                Some(true) => {}
                Some(false) => {
                    return Err(Error::Invariant(format!(
                        "a* = `{star_label}` already bound to 0 while reducing {eta}"
                    )))
                }
                None => phi = phi.extend(star_label.clone(), true)?,
            }
        }
        if phi.contains(alpha) {
            return Err(Error::Invariant(format!("α = `{alpha}` bound by the reduction of {eta}")));
        }
        Ok(phi)
    }

    /// The sets of the inclusion chain behind [`claim1_witness`]:
    ///
    /// 0. `E[η]`
    /// 1. `⋂_{η=0} (D⁰(j) ∖ (D⁰(a⁻) ∩ D⁰(a⁺))) ∩ ⋂_{η=1} D¹(j)`
    /// 2. `⋂_{η=0} (D⁰(j) ∩ D¹(a*)) ∩ ⋂_{η=1} D¹(j)`
    /// 3. `D[φ]`
    ///
    /// with `0 ⊇ 1 ⊇ 2 = 3`.
    ///
    /// [`claim1_witness`]: Self::claim1_witness
    pub fn claim1_chain(&self, eta: &Condition, alpha: &str) -> Result<[PointSet; 4]> {
        let alpha_pos = self.alpha_pos(alpha)?;
        let n = self.d_block.n();
        let mut l1 = PointSet::full(n);
        let mut l2 = PointSet::full(n);
        for (label, side) in eta.iter() {
            let idx = self
                .e_index(label)
                .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
            let dj = self.d_block.get(self.injection.get(idx).expect("total on E"))?;
            let lo = self.d_block.get(&self.split.i_labels[idx.lo])?;
            let hi = self.d_block.get(&self.split.i_labels[idx.hi])?;
            if side {
                l1.intersect_with(dj.side1());
                l2.intersect_with(dj.side1());
            } else {
                l1.intersect_with(&(dj.side0() - &(lo.side0() & hi.side0())));
                let star = if idx.lo != alpha_pos { lo } else { hi };
                l2.intersect_with(&(dj.side0() & star.side1()));
            }
        }
        let l0 = self.e_block.evaluate_trace(eta)?;
        let l3 = self.d_block.evaluate_trace(&self.claim1_witness(eta, alpha)?)?;
        Ok([l0, l1, l2, l3])
    }

    /// Splits a condition over `C ∪ E` into its C-part and E-part.
    fn split_condition(&self, cond: &Condition) -> (Condition, Condition) {
        let eps = cond.restrict(|l| self.c_block.position(l).is_some());
        let eta = cond.restrict(|l| self.e_index.contains_key(l));
        (eps, eta)
    }

    fn check_space(&self, space: &TraceSpace) -> Result<()> {
        for e in space.family().entries() {
            let known = match e.block {
                Block::C => self.c_block.position(&e.label).is_some(),
                Block::E => self.e_index.contains_key(&e.label),
                _ => false,
            };
            if !known {
                return Err(Error::Precondition(format!(
                    "space partition `{}` is neither a C- nor an E-partition of this construction",
                    e.label
                )));
            }
        }
        Ok(())
    }

    /// Exhaustive soundness of [`claim1_witness`](Self::claim1_witness) for
    /// every η of depth `<= depth` over the E-block and every α in `I`,
    /// including the stepwise inclusion chain.
    pub fn verify_claim1(&self, depth: usize) -> Result<Claim1Report> {
        let positions: Vec<usize> = (0..self.e_block.len()).collect();
        let etas = enumerate_conditions(&positions, depth, ENUMERATION_LIMIT)?;
        let mut checked = 0;
        for lits in &etas {
            let eta = self.e_block.condition_of(lits);
            for alpha in &self.split.i_labels {
                let phi = self.claim1_witness(&eta, alpha)?;
                let [l0, l1, l2, l3] = self.claim1_chain(&eta, alpha)?;
                let ok = !phi.contains(alpha)
                    && l3.is_subset(&l0)
                    && l1.is_subset(&l0)
                    && l2.is_subset(&l1)
                    && l2 == l3;
                checked += 1;
                if !ok {
                    return Ok(Claim1Report {
                        holds: false,
                        checked,
                        failure: Some(Claim1Case {
                            eta,
                            alpha: alpha.clone(),
                            phi,
                        }),
                    });
                }
            }
        }
        Ok(Claim1Report {
            holds: true,
            checked,
            failure: None,
        })
    }

    /// Independence of `C ∪ E`: for every condition over the space, reduce
    /// its E-part η to φ (with α the first I-label) and require both
    /// `|C[ε] ∩ D[φ]| >= t` and `|C[ε] ∩ E[η]| >= t`.
    pub fn verify_claim2(&self, space: &TraceSpace) -> Result<Claim2Report> {
        self.check_space(space)?;
        let t = space.threshold();
        let alpha = &self.split.i_labels[0];
        let mut chains = Vec::new();
        for open in space.basic_opens() {
            let cond = space.condition(&open.lits);
            let (eps, eta) = self.split_condition(&cond);
            let phi = self.claim1_witness(&eta, alpha)?;
            let c_tr = self.c_block.evaluate_trace(&eps)?;
            let via_d = c_tr.intersection_len(&self.d_block.evaluate_trace(&phi)?);
            let direct = open.trace.len();
            let step = Reduction { eps, eta, phi };
            if via_d < t || direct < t {
                return Ok(Claim2Report {
                    holds: false,
                    checked: chains.len() + 1,
                    failure: Some(step),
                    chains,
                });
            }
            chains.push(step);
        }
        Ok(Claim2Report {
            holds: true,
            checked: chains.len(),
            failure: None,
            chains,
        })
    }

    /// Density of every `D⁰_α` in the space, checked directly and along the
    /// reduction `D⁰_α ∩ D[φ] ∩ C[ε] ≠ ∅` with `α ∉ dom φ`.
    pub fn verify_claim3a(&self, space: &TraceSpace) -> Result<Claim3aReport> {
        self.check_space(space)?;
        let mut per_alpha = Vec::new();
        for alpha in &self.split.i_labels {
            let cand = self.candidate(alpha)?;
            let dense = space.is_dense(cand);
            let mut proof_path = Verdict::pass();
            for open in space.nonempty_opens() {
                let cond = space.condition(&open.lits);
                let (eps, eta) = self.split_condition(&cond);
                let phi = self.claim1_witness(&eta, alpha)?;
                let mut tr = self.d_block.evaluate_trace(&phi)?;
                tr.intersect_with(cand);
                tr.intersect_with(&self.c_block.evaluate_trace(&eps)?);
                if tr.is_empty() {
                    proof_path = Verdict::fail(cond);
                    break;
                }
            }
            per_alpha.push(AlphaDensity {
                alpha: alpha.clone(),
                dense,
                proof_path,
            });
        }
        Ok(Claim3aReport {
            holds: per_alpha.iter().all(|a| a.dense.holds),
            per_alpha,
        })
    }

    /// Nowhere density of `D⁰_α ∩ D⁰_β` for every pair of I-labels, with
    /// budget 1: each nonempty basic open `C[ε] ∩ E[η]` is extended by
    /// `(a,m) ↦ 0` for the least `m` with `(a,m) ∉ dom η`. When every copy of
    /// `a` is already bound and one of them to 0, the open itself already
    /// misses the intersection and is its own witness; when all are bound to
    /// 1 the truncation at `m_max` is too small and a sizing error results.
    /// The witness map of each pair is replayed through the space's own
    /// nowhere-density check.
    pub fn verify_claim3b(&self, space: &TraceSpace) -> Result<Claim3bReport> {
        self.check_space(space)?;
        let k = self.split.i_labels.len();
        let mut pairs = Vec::new();
        for lo in 0..k {
            for hi in lo + 1..k {
                pairs.push(self.claim3b_pair(space, lo, hi)?);
            }
        }
        Ok(Claim3bReport {
            holds: pairs.iter().all(|p| p.holds),
            pairs,
        })
    }

    fn claim3b_pair(&self, space: &TraceSpace, lo: usize, hi: usize) -> Result<PairNwd> {
        let alpha = &self.split.i_labels[lo];
        let beta = &self.split.i_labels[hi];
        let target = self.candidate(alpha)? & self.candidate(beta)?;
        let labels: Vec<String> = (0..self.m_max)
            .map(|m| e_label(&self.split, EIndex { lo, hi, m }))
            .collect();
        let mut witnesses = Vec::new();
        let mut copies = Vec::new();
        let mut failing = None;
        for open in space.nonempty_opens() {
            let base = space.condition(&open.lits);
            let (extension, m) = match labels.iter().position(|l| !base.contains(l)) {
                Some(m) => (base.extend(labels[m].clone(), false)?, Some(m)),
                None if labels.iter().any(|l| base.get(l) == Some(false)) => (base.clone(), None),
                None => {
                    return Err(Error::Sizing(format!(
                        "basic open {base} binds every copy of pair ({alpha},{beta}) to 1; \
                         m_max = {} is too small for depth {}, use m_max > depth",
                        self.m_max,
                        space.depth()
                    )))
                }
            };
            let tr = space.family().evaluate_trace(&extension)?;
            if failing.is_none() && (tr.is_empty() || tr.intersects(&target)) {
                failing = Some(base.clone());
            }
            copies.push(m);
            witnesses.push(NwdWitness { base, extension });
        }
        let replay = space.check_nwd_witnesses(&target, 1, &witnesses)?;
        let direct = space.nowhere_dense(&target, 1)?;
        Ok(PairNwd {
            alpha: alpha.clone(),
            beta: beta.clone(),
            holds: failing.is_none() && replay.holds && direct,
            failing,
            replay_holds: replay.holds,
            direct_holds: direct,
            copies,
            witnesses,
        })
    }
}

/// The space generated by `c_block ∪ e_block`, block tags preserved.
pub fn assemble_space(c_block: &PartitionFamily, e_block: &PartitionFamily, depth: usize, threshold: usize) -> Result<TraceSpace> {
    TraceSpace::new(c_block.concat(e_block)?, depth, threshold)
}

/// Looks for two generator pairs with compatible C-parts and compatible
/// D-parts; when found, the joint trace is nonempty by independence and its
/// least point lies in both generated dense sets.
pub fn verify_claim4(
    c_block: &PartitionFamily,
    d_block: &PartitionFamily,
    generators: &[GeneratorPair],
    dense_sets: &[PointSet],
) -> Result<Claim4Report> {
    if generators.len() != dense_sets.len() {
        return Err(Error::Precondition(format!(
            "{} generator pairs for {} dense sets",
            generators.len(),
            dense_sets.len()
        )));
    }
    let joint = c_block.concat(d_block)?;
    let mut combined = Vec::with_capacity(generators.len());
    for (i, (g, f)) in generators.iter().zip(dense_sets).enumerate() {
        let cond = g
            .phi
            .compatible(&g.eps)
            .ok_or_else(|| Error::Precondition(format!("generator {i} halves share a label")))?;
        let tr = joint.evaluate_trace(&cond)?;
        if !tr.is_subset(f) {
            return Err(Error::Precondition(format!("generator {i} is not contained in its dense set")));
        }
        combined.push(cond);
    }
    let Some((a, b)) = find_compatible_pair(&combined) else {
        return Ok(Claim4Report {
            pair: None,
            point: None,
            holds: false,
            note: format!("no compatible pair among {} generator pairs", generators.len()),
        });
    };
    let union = combined[a].compatible(&combined[b]).expect("found compatible");
    let tr = joint.evaluate_trace(&union)?;
    let point = tr.first();
    let holds = point.is_some_and(|p| dense_sets[a].contains(p) && dense_sets[b].contains(p));
    let note = match point {
        Some(p) => format!("point {p} lies in dense sets {a} and {b}"),
        None => format!("joint trace of generators {a} and {b} is empty: independence fails"),
    };
    Ok(Claim4Report {
        pair: Some((a, b)),
        point,
        holds,
        note,
    })
}

/// Tags the first `mu_c` partitions of `family` as `c0, c1, ...` (block C)
/// and the rest as `d0, d1, ...` (block D).
pub fn split_blocks(family: &PartitionFamily, mu_c: usize) -> Result<(PartitionFamily, PartitionFamily)> {
    if mu_c > family.len() {
        return Err(Error::Precondition(format!(
            "cannot take {mu_c} C-partitions from a family of {}",
            family.len()
        )));
    }
    let mut c = PartitionFamily::new(family.ground());
    let mut d = PartitionFamily::new(family.ground());
    for (i, e) in family.entries().iter().enumerate() {
        if i < mu_c {
            c.push(format!("c{i}"), Block::C, e.partition.clone())?;
        } else {
            d.push(format!("d{}", i - mu_c), Block::D, e.partition.clone())?;
        }
    }
    Ok((c, d))
}

/// Reads the C-block (tag C, or tag B relabelled `c0, c1, ...` when there is
/// no C-tagged partition) and the D-block of a family.
pub fn blocks_of(family: &PartitionFamily) -> Result<(PartitionFamily, PartitionFamily)> {
    let c = if family.block_positions(Block::C).is_empty() {
        family.block(Block::B).retag(Block::B, Block::C, "c")?
    } else {
        family.block(Block::C)
    };
    Ok((c, family.block(Block::D)))
}

/// Parameters of a generated instance: a random family split into a C-block
/// of `mu_c` partitions and a D-block sized for `size_i` and `m_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineParams {
    pub mu_c: usize,
    pub size_i: usize,
    pub m_max: usize,
    pub n: usize,
    pub depth: usize,
    pub threshold: usize,
    pub seed: u64,
}

impl Default for PipelineParams {
    fn default() -> Self {
        PipelineParams {
            mu_c: 2,
            size_i: 4,
            m_max: 4,
            n: 4096,
            depth: 3,
            threshold: 1,
            seed: 7,
        }
    }
}

impl PipelineParams {
    /// Draws the family, rejects it unless it is independent at
    /// `(depth, threshold)`, and builds the construction on the canonical
    /// split.
    pub fn build(&self) -> Result<Construction> {
        let mu_d = d_labels_needed(self.size_i, self.m_max);
        let draw = random_family(self.mu_c + mu_d, self.n, self.depth, self.threshold, self.seed)?;
        let family = match draw {
            RandomDraw::Accepted(f) => f,
            RandomDraw::Rejected { failing, .. } => {
                return Err(Error::Precondition(format!(
                    "seed {} draws a family that is not independent: trace of {failing} is too small",
                    self.seed
                )))
            }
        };
        let (c, d) = split_blocks(&family, self.mu_c)?;
        Construction::new(c, d, self.size_i, self.m_max)
    }
}

/// Number of D-labels needed for `size_i` and `m_max`.
pub fn d_labels_needed(size_i: usize, m_max: usize) -> usize {
    size_i + choose2(size_i) * m_max
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim1Case {
    pub eta: Condition,
    pub alpha: String,
    pub phi: Condition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim1Report {
    pub holds: bool,
    pub checked: usize,
    pub failure: Option<Claim1Case>,
}

/// One reduction step: the basic open `C[ε] ∩ E[η]` and the D-condition φ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reduction {
    pub eps: Condition,
    pub eta: Condition,
    pub phi: Condition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim2Report {
    pub holds: bool,
    pub checked: usize,
    pub failure: Option<Reduction>,
    pub chains: Vec<Reduction>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlphaDensity {
    pub alpha: String,
    pub dense: Verdict,
    pub proof_path: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim3aReport {
    pub holds: bool,
    pub per_alpha: Vec<AlphaDensity>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairNwd {
    pub alpha: String,
    pub beta: String,
    pub holds: bool,
    pub failing: Option<Condition>,
    pub replay_holds: bool,
    pub direct_holds: bool,
    /// Copy index used per witness; `None` where the open was its own witness.
    pub copies: Vec<Option<usize>>,
    pub witnesses: Vec<NwdWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim3bReport {
    pub holds: bool,
    pub pairs: Vec<PairNwd>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim4Report {
    pub pair: Option<(usize, usize)>,
    pub point: Option<usize>,
    pub holds: bool,
    pub note: String,
}
