//! Ground sets, point sets, 2-partitions, partition families and conditions.
//!
//! Points are the integers `0..n`. A [`PointSet`] is a fixed-width bitset over
//! that range; all set algebra in the crate goes through it. Conditions are
//! finite partial maps from partition labels to sides, and evaluating one
//! against a [`PartitionFamily`] yields its trace: the intersection of the
//! selected sides.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};

use serde::de::{self, MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const WORD: usize = 64;

/// The points `0..n`, with `n >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroundSet(usize);

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGroundSet);
        }
        Ok(GroundSet(n))
    }

    pub fn len(self) -> usize {
        self.0
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn full(self) -> PointSet {
        PointSet::full(self.0)
    }
}

/// A subset of `0..n` stored as a packed bitset. Bits at positions `>= n` are
/// always zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet {
    n: usize,
    words: Vec<u64>,
}

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

impl PointSet {
    pub fn empty(n: usize) -> Self {
        PointSet {
            n,
            words: vec![0; words_for(n)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = PointSet {
            n,
            words: vec![!0; words_for(n)],
        };
        s.clear_tail();
        s
    }

    pub fn from_points<I: IntoIterator<Item = usize>>(n: usize, points: I) -> Result<Self> {
        let mut s = PointSet::empty(n);
        for p in points {
            if p >= n {
                return Err(Error::PointOutOfRange { point: p, n });
            }
            s.insert(p);
        }
        Ok(s)
    }

    /// Builds a set from the low `n` bits of `mask`. Requires `n <= 64`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        assert!(n <= WORD, "from_mask needs n <= 64");
        let mut s = PointSet::empty(n);
        if n > 0 {
            s.words[0] = mask;
            s.clear_tail();
        }
        s
    }

    /// The set as a bitmask. Requires `n <= 64`.
    pub fn to_mask(&self) -> u64 {
        assert!(self.n <= WORD, "to_mask needs n <= 64");
        self.words.first().copied().unwrap_or(0)
    }

    pub(crate) fn from_words(n: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(n));
        let mut s = PointSet { n, words };
        s.clear_tail();
        s
    }

    fn clear_tail(&mut self) {
        let rem = self.n % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Size of the ground set this set lives in.
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn contains(&self, p: usize) -> bool {
        p < self.n && self.words[p / WORD] >> (p % WORD) & 1 == 1
    }

    pub fn insert(&mut self, p: usize) {
        assert!(p < self.n, "point {p} out of range 0..{}", self.n);
        self.words[p / WORD] |= 1 << (p % WORD);
    }

    pub fn remove(&mut self, p: usize) {
        if p < self.n {
            self.words[p / WORD] &= !(1 << (p % WORD));
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * WORD + b)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn check_same(&self, other: &PointSet) {
        assert_eq!(self.n, other.n, "point sets over different ground sets");
    }

    pub fn intersect_with(&mut self, other: &PointSet) {
        self.check_same(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &PointSet) {
        self.check_same(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: &PointSet) {
        self.check_same(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn complement(&self) -> PointSet {
        let mut s = PointSet {
            n: self.n,
            words: self.words.iter().map(|w| !w).collect(),
        };
        s.clear_tail();
        s
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.check_same(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &PointSet) -> bool {
        self.check_same(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn intersects(&self, other: &PointSet) -> bool {
        !self.is_disjoint(other)
    }

    pub fn intersection_len(&self, other: &PointSet) -> usize {
        self.check_same(other);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl BitAnd for &PointSet {
    type Output = PointSet;
    fn bitand(self, rhs: &PointSet) -> PointSet {
        let mut s = self.clone();
        s.intersect_with(rhs);
        s
    }
}

impl BitOr for &PointSet {
    type Output = PointSet;
    fn bitor(self, rhs: &PointSet) -> PointSet {
        let mut s = self.clone();
        s.union_with(rhs);
        s
    }
}

impl Sub for &PointSet {
    type Output = PointSet;
    fn sub(self, rhs: &PointSet) -> PointSet {
        let mut s = self.clone();
        s.difference_with(rhs);
        s
    }
}

impl Not for &PointSet {
    type Output = PointSet;
    fn not(self) -> PointSet {
        self.complement()
    }
}

impl Serialize for PointSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

/// A complementary pair of sides over one ground set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoPartition {
    side0: PointSet,
    side1: PointSet,
}

impl TwoPartition {
    /// Side 1 is the complement of `side0`.
    pub fn from_side0(side0: PointSet) -> Self {
        let side1 = side0.complement();
        TwoPartition { side0, side1 }
    }

    pub fn side0(&self) -> &PointSet {
        &self.side0
    }

    pub fn side1(&self) -> &PointSet {
        &self.side1
    }

    pub fn side(&self, value: bool) -> &PointSet {
        if value {
            &self.side1
        } else {
            &self.side0
        }
    }

    pub fn universe(&self) -> usize {
        self.side0.universe()
    }
}

/// Provenance tag of a partition inside a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Block {
    B,
    D,
    C,
    E,
    #[serde(rename = "other")]
    Other,
}

impl Block {
    pub fn as_str(self) -> &'static str {
        match self {
            Block::B => "B",
            Block::D => "D",
            Block::C => "C",
            Block::E => "E",
            Block::Other => "other",
        }
    }

    pub fn parse(s: &str) -> Option<Block> {
        Some(match s {
            "B" => Block::B,
            "D" => Block::D,
            "C" => Block::C,
            "E" => Block::E,
            "other" => Block::Other,
            _ => return None,
        })
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyEntry {
    pub label: String,
    pub block: Block,
    pub partition: TwoPartition,
}

/// A binding of the partition at `pos` (family order) to one of its sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub pos: u32,
    pub side: bool,
}

impl Literal {
    pub fn new(pos: usize, side: bool) -> Self {
        Literal {
            pos: pos as u32,
            side,
        }
    }
}

/// An ordered list of labelled 2-partitions over a common ground set.
#[derive(Clone, Debug)]
pub struct PartitionFamily {
    ground: GroundSet,
    entries: Vec<FamilyEntry>,
    index: HashMap<String, usize>,
}

impl PartialEq for PartitionFamily {
    fn eq(&self, other: &Self) -> bool {
        self.ground == other.ground && self.entries == other.entries
    }
}

impl Eq for PartitionFamily {}

impl PartitionFamily {
    pub fn new(ground: GroundSet) -> Self {
        PartitionFamily {
            ground,
            entries: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn push(
        &mut self,
        label: impl Into<String>,
        block: Block,
        partition: TwoPartition,
    ) -> Result<()> {
        let label = label.into();
        if partition.universe() != self.ground.len() {
            return Err(Error::GroundMismatch {
                expected: self.ground.len(),
                found: partition.universe(),
            });
        }
        if self.index.contains_key(&label) {
            return Err(Error::DuplicateLabel(label));
        }
        self.index.insert(label.clone(), self.entries.len());
        self.entries.push(FamilyEntry {
            label,
            block,
            partition,
        });
        Ok(())
    }

    pub fn push_side0(&mut self, label: impl Into<String>, block: Block, side0: PointSet) -> Result<()> {
        self.push(label, block, TwoPartition::from_side0(side0))
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.len()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[FamilyEntry] {
        &self.entries
    }

    pub fn entry(&self, pos: usize) -> &FamilyEntry {
        &self.entries[pos]
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.label.as_str())
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn get(&self, label: &str) -> Result<&TwoPartition> {
        self.position(label)
            .map(|p| &self.entries[p].partition)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Positions of the partitions tagged `block`, in family order.
    pub fn block_positions(&self, block: Block) -> Vec<usize> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.block == block)
            .map(|(i, _)| i)
            .collect()
    }

    /// The sub-family of partitions tagged `block`, in family order.
    pub fn block(&self, block: Block) -> PartitionFamily {
        let mut out = PartitionFamily::new(self.ground);
        for e in self.entries.iter().filter(|e| e.block == block) {
            out.push(e.label.clone(), e.block, e.partition.clone())
                .expect("labels of a family are distinct");
        }
        out
    }

    /// Appends every partition of `other`. Fails on a label collision.
    pub fn concat(&self, other: &PartitionFamily) -> Result<PartitionFamily> {
        if self.ground != other.ground {
            return Err(Error::GroundMismatch {
                expected: self.n(),
                found: other.n(),
            });
        }
        let mut out = self.clone();
        for e in &other.entries {
            out.push(e.label.clone(), e.block, e.partition.clone())?;
        }
        Ok(out)
    }

    /// Family with the partitions at `drop` removed.
    pub fn without_positions(&self, drop: &[usize]) -> PartitionFamily {
        let mut out = PartitionFamily::new(self.ground);
        for (i, e) in self.entries.iter().enumerate() {
            if !drop.contains(&i) {
                out.push(e.label.clone(), e.block, e.partition.clone())
                    .expect("labels of a family are distinct");
            }
        }
        out
    }

    /// Relabels the partitions tagged `from` as `{prefix}{k}` with tag `to`,
    /// numbering them in family order.
    pub fn retag(&self, from: Block, to: Block, prefix: &str) -> Result<PartitionFamily> {
        let mut out = PartitionFamily::new(self.ground);
        let mut k = 0;
        for e in &self.entries {
            if e.block == from {
                out.push(format!("{prefix}{k}"), to, e.partition.clone())?;
                k += 1;
            } else {
                out.push(e.label.clone(), e.block, e.partition.clone())?;
            }
        }
        Ok(out)
    }

    pub fn side(&self, lit: Literal) -> &PointSet {
        self.entries[lit.pos as usize].partition.side(lit.side)
    }

    /// Resolves a labelled condition into literals sorted by family position.
    pub fn resolve(&self, cond: &Condition) -> Result<Vec<Literal>> {
        let mut lits = cond
            .iter()
            .map(|(label, side)| {
                self.position(label)
                    .map(|p| Literal::new(p, side))
                    .ok_or_else(|| Error::UnknownLabel(label.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        lits.sort_unstable();
        Ok(lits)
    }

    pub fn condition_of(&self, lits: &[Literal]) -> Condition {
        let mut c = Condition::new();
        for l in lits {
            c.bindings
                .insert(self.entries[l.pos as usize].label.clone(), l.side);
        }
        c
    }

    /// Writes the trace of `lits` into `out`. Literals may be in any order;
    /// an empty slice yields the whole ground set.
    pub fn trace_into(&self, lits: &[Literal], out: &mut PointSet) {
        debug_assert_eq!(out.n, self.n());
        let Some((first, rest)) = lits.split_first() else {
            out.words.fill(!0);
            out.clear_tail();
            return;
        };
        out.words.copy_from_slice(&self.side(*first).words);
        for l in rest {
            for (a, b) in out.words.iter_mut().zip(&self.side(*l).words) {
                *a &= b;
            }
        }
    }

    pub fn trace_lits(&self, lits: &[Literal]) -> PointSet {
        let mut out = PointSet::empty(self.n());
        self.trace_into(lits, &mut out);
        out
    }

    /// The trace of `cond`: the intersection of the bound sides.
    pub fn evaluate_trace(&self, cond: &Condition) -> Result<PointSet> {
        let lits = self.resolve(cond)?;
        Ok(self.trace_lits(&lits))
    }

    /// Union of two conditions over this family, `None` when they clash.
    pub fn compatible(&self, c1: &Condition, c2: &Condition) -> Result<Option<Condition>> {
        for label in c1.labels().chain(c2.labels()) {
            if self.position(label).is_none() {
                return Err(Error::UnknownLabel(label.to_string()));
            }
        }
        Ok(c1.compatible(c2))
    }
}

/// A finite partial map from partition labels to sides (`false` = side 0).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Condition {
    bindings: BTreeMap<String, bool>,
}

impl Condition {
    pub fn new() -> Self {
        Condition::default()
    }

    /// Builds a condition from `(label, side)` pairs; a repeated label is an error.
    pub fn from_pairs<S: Into<String>, I: IntoIterator<Item = (S, u8)>>(pairs: I) -> Result<Self> {
        let mut c = Condition::new();
        for (label, v) in pairs {
            let label = label.into();
            if v > 1 {
                return Err(Error::Precondition(format!(
                    "side of `{label}` must be 0 or 1, got {v}"
                )));
            }
            c = c.extend(label, v == 1)?;
        }
        Ok(c)
    }

    pub fn depth(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn get(&self, label: &str) -> Option<bool> {
        self.bindings.get(label).copied()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.bindings.contains_key(label)
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.bindings.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, bool)> {
        self.bindings.iter().map(|(k, &v)| (k.as_str(), v))
    }

    /// A copy with one extra binding. Rebinding an existing label is an error.
    pub fn extend(&self, label: impl Into<String>, side: bool) -> Result<Condition> {
        let label = label.into();
        if self.bindings.contains_key(&label) {
            return Err(Error::AlreadyBound(label));
        }
        let mut c = self.clone();
        c.bindings.insert(label, side);
        Ok(c)
    }

    /// The union of both conditions, or `None` if they disagree on a shared label.
    pub fn compatible(&self, other: &Condition) -> Option<Condition> {
        let mut out = self.clone();
        for (label, &side) in &other.bindings {
            match out.bindings.get(label) {
                Some(&s) if s != side => return None,
                Some(_) => {}
                None => {
                    out.bindings.insert(label.clone(), side);
                }
            }
        }
        Some(out)
    }

    /// True when every binding of `self` also occurs in `other`.
    pub fn is_sub_condition_of(&self, other: &Condition) -> bool {
        self.bindings
            .iter()
            .all(|(k, v)| other.bindings.get(k) == Some(v))
    }

    /// The bindings whose labels satisfy `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(&str) -> bool) -> Condition {
        Condition {
            bindings: self
                .bindings
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}\u{21a6}{}", *v as u8)?;
        }
        f.write_str("}")
    }
}

impl Serialize for Condition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_map(self.bindings.iter().map(|(k, v)| (k, *v as u8)))
    }
}

impl<'de> Deserialize<'de> for Condition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct CondVisitor;
        impl<'de> Visitor<'de> for CondVisitor {
            type Value = Condition;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an object mapping labels to 0 or 1")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<Condition, A::Error> {
                let mut c = Condition::new();
                while let Some((k, v)) = map.next_entry::<String, u8>()? {
                    if v > 1 {
                        return Err(de::Error::custom(format!("side of `{k}` must be 0 or 1")));
                    }
                    if c.bindings.insert(k.clone(), v == 1).is_some() {
                        return Err(de::Error::custom(format!("label `{k}` bound twice")));
                    }
                }
                Ok(c)
            }
        }
        deserializer.deserialize_map(CondVisitor)
    }
}

/// Number of conditions of depth `<= max_depth` over `universe` partitions.
pub fn count_conditions(universe: usize, max_depth: usize) -> u128 {
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for k in 0..=max_depth.min(universe) {
        total += binom << k;
        binom = binom * (universe - k) as u128 / (k as u128 + 1);
    }
    total
}

/// Enumerates every condition of depth `<= max_depth` over the given family
/// positions in canonical order: by depth, then by position tuple
/// lexicographically, then by side pattern counted in binary with the first
/// literal most significant. "Least" condition everywhere in the crate means
/// first in this order.
#[derive(Clone, Debug)]
pub struct ConditionIter {
    positions: Vec<u32>,
    max_depth: usize,
    depth: usize,
    combo: Vec<usize>,
    pattern: u64,
    done: bool,
}

impl ConditionIter {
    pub fn new(positions: &[usize], max_depth: usize) -> Self {
        assert!(max_depth < 64, "condition depth must stay below 64");
        ConditionIter {
            positions: positions.iter().map(|&p| p as u32).collect(),
            max_depth: max_depth.min(positions.len()),
            depth: 0,
            combo: Vec::new(),
            pattern: 0,
            done: false,
        }
    }

    pub fn over_family(family: &PartitionFamily, max_depth: usize) -> Self {
        let all: Vec<usize> = (0..family.len()).collect();
        ConditionIter::new(&all, max_depth)
    }

    fn advance_combo(&mut self) -> bool {
        let k = self.depth;
        let m = self.positions.len();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.combo[i] < m - k + i {
                self.combo[i] += 1;
                for j in i + 1..k {
                    self.combo[j] = self.combo[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for ConditionIter {
    type Item = Vec<Literal>;

    fn next(&mut self) -> Option<Vec<Literal>> {
        if self.done {
            return None;
        }
        let k = self.depth;
        let lits = self
            .combo
            .iter()
            .enumerate()
            .map(|(i, &c)| Literal {
                pos: self.positions[c],
                side: self.pattern >> (k - 1 - i) & 1 == 1,
            })
            .collect();
        // step
        if k > 0 && self.pattern + 1 < (1u64 << k) {
            self.pattern += 1;
        } else {
            self.pattern = 0;
            if k == 0 || !self.advance_combo() {
                if k == self.max_depth {
                    self.done = true;
                } else {
                    self.depth += 1;
                    self.combo = (0..self.depth).collect();
                }
            }
        }
        Some(lits)
    }
}

/// All conditions of depth `<= max_depth` over `positions`, in canonical
/// order, refusing enumerations larger than `limit`.
pub fn enumerate_conditions(positions: &[usize], max_depth: usize, limit: u128) -> Result<Vec<Vec<Literal>>> {
    let count = count_conditions(positions.len(), max_depth);
    if count > limit {
        return Err(Error::Capacity(format!(
            "{count} conditions of depth <= {max_depth} over {} partitions exceed the limit {limit}",
            positions.len()
        )));
    }
    Ok(ConditionIter::new(positions, max_depth).collect())
}

/// Default bound on materialised condition enumerations.
pub const ENUMERATION_LIMIT: u128 = 1 << 24;

#[cfg(test)]
mod tests {
    use super::*;

    /// Partition k splits on bit k of the point; side 0 holds the zeros.
    fn bit_family(bits: usize) -> PartitionFamily {
        let n = 1 << bits;
        let mut f = PartitionFamily::new(GroundSet::new(n).unwrap());
        for k in 0..bits {
            let side0 = PointSet::from_points(n, (0..n).filter(|x| x >> k & 1 == 0)).unwrap();
            f.push_side0(k.to_string(), Block::Other, side0).unwrap();
        }
        f
    }

    fn cond(pairs: &[(&str, u8)]) -> Condition {
        Condition::from_pairs(pairs.iter().map(|&(l, v)| (l, v))).unwrap()
    }

    #[test]
    fn trace_examples() {
        let f = bit_family(3);
        assert_eq!(f.evaluate_trace(&Condition::new()).unwrap().to_vec(), (0..8).collect::<Vec<_>>());
        assert_eq!(f.evaluate_trace(&cond(&[("2", 0)])).unwrap().to_vec(), vec![0, 1, 2, 3]);
        assert_eq!(f.evaluate_trace(&cond(&[("0", 0), ("1", 0)])).unwrap().to_vec(), vec![0, 4]);
    }

    #[test]
    fn unknown_label_is_domain_error() {
        let f = bit_family(3);
        assert!(matches!(
            f.evaluate_trace(&cond(&[("9", 1)])),
            Err(Error::UnknownLabel(l)) if l == "9"
        ));
    }

    #[test]
    fn compatible_examples() {
        assert_eq!(
            cond(&[("0", 1)]).compatible(&cond(&[("1", 0)])),
            Some(cond(&[("0", 1), ("1", 0)]))
        );
        assert_eq!(cond(&[("0", 1)]).compatible(&cond(&[("0", 0)])), None);
        assert_eq!(
            cond(&[("0", 1), ("2", 1)]).compatible(&cond(&[("2", 1)])),
            Some(cond(&[("0", 1), ("2", 1)]))
        );
    }

    #[test]
    fn compatible_rejects_foreign_labels() {
        let f = bit_family(2);
        assert!(f.compatible(&cond(&[("0", 1)]), &cond(&[("x", 0)])).is_err());
        assert_eq!(f.compatible(&cond(&[("0", 1)]), &cond(&[("0", 0)])).unwrap(), None);
    }

    #[test]
    fn extend_examples() {
        assert_eq!(Condition::new().extend("3", false).unwrap(), cond(&[("3", 0)]));
        let base = cond(&[("0", 1)]);
        assert_eq!(base.extend("1", true).unwrap(), cond(&[("0", 1), ("1", 1)]));
        assert_eq!(base, cond(&[("0", 1)]));
        assert!(matches!(base.extend("0", false), Err(Error::AlreadyBound(_))));
    }

    #[test]
    fn duplicate_labels_rejected() {
        let mut f = bit_family(1);
        let err = f.push_side0("0", Block::B, PointSet::empty(2)).unwrap_err();
        assert!(matches!(err, Error::DuplicateLabel(_)));
        assert!(Condition::from_pairs([("a", 0), ("a", 1)]).is_err());
    }

    #[test]
    fn ground_mismatch_rejected() {
        let mut f = bit_family(2);
        assert!(f.push_side0("x", Block::B, PointSet::empty(5)).is_err());
        assert!(matches!(GroundSet::new(0), Err(Error::EmptyGroundSet)));
    }

    #[test]
    fn enumeration_order_and_count() {
        let all: Vec<_> = ConditionIter::new(&[0, 1, 2], 2).collect();
        assert_eq!(all.len() as u128, count_conditions(3, 2));
        assert_eq!(all.len(), 1 + 6 + 12);
        assert!(all[0].is_empty());
        assert_eq!(all[1], vec![Literal::new(0, false)]);
        assert_eq!(all[2], vec![Literal::new(0, true)]);
        assert_eq!(all[7], vec![Literal::new(0, false), Literal::new(1, false)]);
        assert_eq!(all[8], vec![Literal::new(0, false), Literal::new(1, true)]);
        assert_eq!(all[18], vec![Literal::new(1, true), Literal::new(2, true)]);
        let mut dedup = all.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), all.len());
        assert_eq!(ConditionIter::new(&[], 3).count(), 1);
        assert_eq!(ConditionIter::new(&[4, 7], 5).count(), 9);
    }

    #[test]
    fn depth_one_sides_partition_ground() {
        let f = bit_family(3);
        for pos in 0..f.len() {
            let a = f.trace_lits(&[Literal::new(pos, false)]);
            let b = f.trace_lits(&[Literal::new(pos, true)]);
            assert!(a.is_disjoint(&b));
            assert_eq!(&a | &b, PointSet::full(8));
        }
    }

    #[test]
    fn point_set_tail_bits_stay_clear() {
        let s = PointSet::full(70);
        assert_eq!(s.len(), 70);
        assert_eq!(s.complement().len(), 0);
        let e = PointSet::from_points(70, [69, 3]).unwrap();
        assert_eq!(e.complement().len(), 68);
        assert_eq!(e.to_vec(), vec![3, 69]);
        assert!(PointSet::from_points(70, [70]).is_err());
    }

    #[test]
    fn condition_json_shape() {
        let c = cond(&[("b", 1), ("a", 0)]);
        assert_eq!(serde_json::to_string(&c).unwrap(), r#"{"a":0,"b":1}"#);
        let back: Condition = serde_json::from_str(r#"{"a":0,"b":1}"#).unwrap();
        assert_eq!(back, c);
        assert!(serde_json::from_str::<Condition>(r#"{"a":2}"#).is_err());
    }
}
