//! Finite, machine-checkable model of resolvability for spaces generated by
//! families of 2-partitions.
//!
//! The topology on a finite ground set is generated by a family of
//! complementary pairs; basic open sets are the traces of conditions of bounded
//! depth. On top of that the crate provides independence checks and
//! generators, the pairwise E-partition refinement together with verifiers for
//! each step of its correctness argument, exact solvers for the
//! (almost-)resolvability numbers, and Δ-system search.

pub mod construction;
pub mod delta;
pub mod error;
pub mod format;
pub mod independence;
pub mod rng;
pub mod sets;
pub mod solvers;
pub mod space;

pub use error::{Error, Result};
pub use sets::{
    Block, Condition, ConditionIter, GroundSet, Literal, PartitionFamily, PointSet, TwoPartition,
};
pub use space::{Mosaic, TraceSpace, Verdict};
