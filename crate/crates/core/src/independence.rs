//! Independent and separating partition families.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::sets::{
    enumerate_conditions, Block, Condition, GroundSet, Literal, PartitionFamily, PointSet,
    ENUMERATION_LIMIT,
};
use crate::space::Verdict;

/// Largest ground set `product_family` will build.
pub const PRODUCT_MAX_POINTS: usize = 1 << 24;

/// Does every condition of depth `<= depth` have a trace of at least
/// `threshold` points? Reports the least condition that falls short.
pub fn check_independent(family: &PartitionFamily, depth: usize, threshold: usize) -> Result<Verdict> {
    if depth > family.len() {
        return Err(Error::Precondition(format!(
            "depth {depth} exceeds the {} partitions of the family",
            family.len()
        )));
    }
    if threshold == 0 {
        return Ok(Verdict::pass());
    }
    let all: Vec<usize> = (0..family.len()).collect();
    let conds = enumerate_conditions(&all, depth, ENUMERATION_LIMIT)?;
    let failing = conds.par_iter().find_first(|lits| {
        let tr = family.trace_lits(lits);
        tr.len() < threshold
    });
    Ok(match failing {
        Some(lits) => Verdict::fail(family.condition_of(lits)),
        None => Verdict::pass(),
    })
}

/// A pair of distinct points on the same side of every partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Unseparated(pub usize, pub usize);

/// Is every pair of distinct points split by some partition? On failure,
/// returns the lexicographically least unseparated pair.
pub fn check_separating(family: &PartitionFamily) -> Option<Unseparated> {
    let n = family.n();
    let mut first_of: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut best: Option<Unseparated> = None;
    for p in 0..n {
        let sig = signature(family, p);
        match first_of.get(&sig) {
            Some(&q) => {
                // q is the least point with this signature, p the next one
                if best.is_none_or(|b| (q, p) < (b.0, b.1)) {
                    best = Some(Unseparated(q, p));
                }
            }
            None => {
                first_of.insert(sig, p);
            }
        }
    }
    best
}

/// Side bits of point `p` across the whole family, packed.
pub(crate) fn signature(family: &PartitionFamily, p: usize) -> Vec<u64> {
    let mut sig = vec![0u64; family.len().div_ceil(64)];
    for (i, e) in family.entries().iter().enumerate() {
        if e.partition.side1().contains(p) {
            sig[i / 64] |= 1 << (i % 64);
        }
    }
    sig
}

/// The fully independent family on `t * 2^(mu_b + mu_d)` points.
///
/// Point `code * t + copy` carries the `(mu_b + mu_d)`-bit word `code`;
/// partition `i` puts the points whose code has bit `i` clear on side 0. The
/// first `mu_b` partitions are labelled `b0, b1, ...` and tagged B, the rest
/// `d0, d1, ...` and tagged D. Every condition of depth `k` has a trace of
/// exactly `t * 2^(mu_b + mu_d - k)` points.
pub fn product_family(mu_b: usize, mu_d: usize, t: usize) -> Result<PartitionFamily> {
    let mu = mu_b + mu_d;
    if t == 0 {
        return Err(Error::Precondition("copies per code must be at least 1".into()));
    }
    let n = if mu < usize::BITS as usize {
        (1usize << mu).checked_mul(t)
    } else {
        None
    };
    let n = match n {
        Some(n) if n <= PRODUCT_MAX_POINTS => n,
        _ => {
            return Err(Error::Capacity(format!(
                "product family with {mu} partitions and {t} copies exceeds {PRODUCT_MAX_POINTS} points"
            )))
        }
    };
    let mut family = PartitionFamily::new(GroundSet::new(n)?);
    for i in 0..mu {
        let mut side0 = PointSet::empty(n);
        for code in (0..1usize << mu).filter(|c| c >> i & 1 == 0) {
            for copy in 0..t {
                side0.insert(code * t + copy);
            }
        }
        let (label, block) = if i < mu_b {
            (format!("b{i}"), Block::B)
        } else {
            (format!("d{}", i - mu_b), Block::D)
        };
        family.push_side0(label, block, side0)?;
    }
    Ok(family)
}

/// Outcome of a seeded random draw.
#[derive(Clone, Debug)]
pub enum RandomDraw {
    Accepted(PartitionFamily),
    /// The drawn family, and the least condition of depth `<= d` whose trace
    /// has fewer than `t` points.
    Rejected {
        family: PartitionFamily,
        failing: Condition,
    },
}

impl RandomDraw {
    pub fn is_accepted(&self) -> bool {
        matches!(self, RandomDraw::Accepted(_))
    }

    pub fn family(&self) -> &PartitionFamily {
        match self {
            RandomDraw::Accepted(f) | RandomDraw::Rejected { family: f, .. } => f,
        }
    }

    pub fn accepted(self) -> Option<PartitionFamily> {
        match self {
            RandomDraw::Accepted(f) => Some(f),
            RandomDraw::Rejected { .. } => None,
        }
    }
}

/// Draws `mu` uniform 2-partitions of `0..n` and checks depth-`depth`
/// `threshold`-independence.
///
/// Partition `i` is labelled `p{i}` and tagged `other`. Its side 0 is read
/// from `ceil(n / 64)` consecutive generator outputs, one per 64-point word,
/// low bit first; a set bit puts the point on side 0. Partitions are drawn in
/// index order from one [`Rng`] seeded with `seed`.
pub fn random_family(mu: usize, n: usize, depth: usize, threshold: usize, seed: u64) -> Result<RandomDraw> {
    let ground = GroundSet::new(n)?;
    let mut rng = Rng::new(seed);
    let mut family = PartitionFamily::new(ground);
    for i in 0..mu {
        let words = (0..n.div_ceil(64)).map(|_| rng.next_u64()).collect();
        family.push_side0(format!("p{i}"), Block::Other, PointSet::from_words(n, words))?;
    }
    let verdict = check_independent(&family, depth.min(mu), threshold)?;
    Ok(match verdict.failing {
        None => RandomDraw::Accepted(family),
        Some(failing) => RandomDraw::Rejected { family, failing },
    })
}

/// Pair of conditions witnessing a failure of relative density.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelativeDensityFailure {
    /// Over the D-block.
    pub eta: Condition,
    /// Over the C-block.
    pub eps: Condition,
}

/// Is every D-trace of depth `<= depth` `threshold`-dense in the space of the
/// C-block: `|D[eta] ∩ C[eps]| >= threshold` whenever `C[eps]` is nonempty?
/// Depths are capped at each block's size; the first failing pair in
/// eta-major canonical order is reported.
pub fn check_condition1(
    c_block: &PartitionFamily,
    d_block: &PartitionFamily,
    depth: usize,
    threshold: usize,
) -> Result<Option<RelativeDensityFailure>> {
    if c_block.ground() != d_block.ground() {
        return Err(Error::GroundMismatch {
            expected: c_block.n(),
            found: d_block.n(),
        });
    }
    let c_pos: Vec<usize> = (0..c_block.len()).collect();
    let d_pos: Vec<usize> = (0..d_block.len()).collect();
    let c_opens: Vec<(Vec<Literal>, PointSet)> = enumerate_conditions(&c_pos, depth, ENUMERATION_LIMIT)?
        .into_iter()
        .map(|l| {
            let tr = c_block.trace_lits(&l);
            (l, tr)
        })
        .filter(|(_, tr)| !tr.is_empty())
        .collect();
    let etas = enumerate_conditions(&d_pos, depth, ENUMERATION_LIMIT)?;
    let failing = etas.par_iter().find_map_first(|eta| {
        let d_tr = d_block.trace_lits(eta);
        c_opens
            .iter()
            .find(|(_, c_tr)| d_tr.intersection_len(c_tr) < threshold)
            .map(|(eps, _)| RelativeDensityFailure {
                eta: d_block.condition_of(eta),
                eps: c_block.condition_of(eps),
            })
    });
    Ok(failing)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bit_family(bits: usize) -> PartitionFamily {
        let n = 1 << bits;
        let mut f = PartitionFamily::new(GroundSet::new(n).unwrap());
        for k in 0..bits {
            let side0 = PointSet::from_points(n, (0..n).filter(|x| x >> k & 1 == 0)).unwrap();
            f.push_side0(k.to_string(), Block::Other, side0).unwrap();
        }
        f
    }

    #[test]
    fn independence_examples() {
        let f = bit_family(3);
        assert!(check_independent(&f, 2, 0).unwrap().holds);
        assert!(check_independent(&f, 3, 1).unwrap().holds);
        let v = check_independent(&f, 3, 2).unwrap();
        assert!(!v.holds);
        let failing = v.failing.unwrap();
        assert_eq!(failing.depth(), 3);
        assert_eq!(f.evaluate_trace(&failing).unwrap().len(), 1);
        assert_eq!(failing, Condition::from_pairs([("0", 0), ("1", 0), ("2", 0)]).unwrap());
    }

    #[test]
    fn separating_examples() {
        assert_eq!(check_separating(&bit_family(3)), None);
        let mut one = PartitionFamily::new(GroundSet::new(4).unwrap());
        one.push_side0("p", Block::B, PointSet::from_points(4, [0, 1]).unwrap()).unwrap();
        assert_eq!(check_separating(&one), Some(Unseparated(0, 1)));
        one.push_side0("q", Block::B, PointSet::from_points(4, [0, 1]).unwrap()).unwrap();
        assert_eq!(check_separating(&one), Some(Unseparated(0, 1)));
        let mut odd = PartitionFamily::new(GroundSet::new(3).unwrap());
        odd.push_side0("p", Block::B, PointSet::from_points(3, [1]).unwrap()).unwrap();
        assert_eq!(check_separating(&odd), Some(Unseparated(0, 2)));
    }

    #[test]
    fn product_examples() {
        let f = product_family(0, 3, 2).unwrap();
        assert_eq!(f.n(), 16);
        let v = check_independent(&f, 3, 2).unwrap();
        assert!(v.holds);
        assert!(!check_independent(&f, 3, 3).unwrap().holds);

        let g = product_family(1, 1, 1).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.labels().collect::<Vec<_>>(), vec!["b0", "d0"]);
        assert_eq!(g.entry(0).block, Block::B);
        assert_eq!(g.entry(1).block, Block::D);
        assert!(check_independent(&g, 2, 1).unwrap().holds);
        assert!(check_separating(&g).is_none());
        assert!(check_separating(&product_family(1, 1, 2).unwrap()).is_some());
        assert!(matches!(product_family(20, 20, 1), Err(Error::Capacity(_))));
        assert!(product_family(1, 1, 0).is_err());
    }

    #[test]
    fn random_family_is_reproducible() {
        let a = random_family(20, 64, 2, 1, 1).unwrap();
        let b = random_family(20, 64, 2, 1, 1).unwrap();
        assert_eq!(a.family(), b.family());
        assert_eq!(a.is_accepted(), b.is_accepted());
        let c = random_family(20, 64, 2, 1, 2).unwrap();
        assert_ne!(a.family(), c.family());
    }

    #[test]
    fn random_verdict_is_rechecked() {
        for seed in 0..8 {
            let draw = random_family(1, 2, 1, 1, seed).unwrap();
            let v = check_independent(draw.family(), 1, 1).unwrap();
            assert_eq!(v.holds, draw.is_accepted());
            if let RandomDraw::Rejected { family, failing } = &draw {
                assert_eq!(family.evaluate_trace(failing).unwrap().len(), 0);
            }
        }
    }

    #[test]
    fn condition1_examples() {
        let f = product_family(2, 3, 1).unwrap();
        let c = f.block(Block::B);
        let d = f.block(Block::D);
        assert_eq!(check_condition1(&c, &d, 5, 1).unwrap(), None);
        // with an empty C-block this is independence of D
        let empty = PartitionFamily::new(f.ground());
        assert_eq!(check_condition1(&empty, &d, 3, 1).unwrap(), None);
        // each depth-3 D-cell holds the 4 points of the B-bits
        assert_eq!(check_condition1(&empty, &d, 3, 4).unwrap(), None);
        assert!(check_condition1(&empty, &d, 3, 5).unwrap().is_some());
        assert!(!check_independent(&d, 3, 5).unwrap().holds);
        // a D-partition copied into the C-block
        let mut dup = c.clone();
        dup.push("copy", Block::C, d.entry(0).partition.clone()).unwrap();
        let fail = check_condition1(&dup, &d, 2, 1).unwrap().unwrap();
        assert_eq!(fail.eta, Condition::from_pairs([("d0", 0)]).unwrap());
        assert_eq!(fail.eps, Condition::from_pairs([("copy", 1)]).unwrap());
    }
}
