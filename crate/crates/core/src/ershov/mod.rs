//! Stage approximations, mind-change accounting and nested-difference
//! decompositions.

mod approx;
mod classify;
mod decompose;

pub use approx::{ApproxRule, Delta2Approx};
pub use classify::{classify_ce_level, CeLevelReport, OmegaVerdict};
pub use decompose::{decompose_even, decompose_odd, decompose_omega, LevelSets, OddDecomposition, StageSetFamily};
