//! Finite-horizon workbench for truth-table reductions over infinite bit
//! sequences, complexity estimation and effective dimension, switching and
//! adversary constructions, and Δ⁰₂ approximations.
//!
//! Every infinite object is a finite description evaluated lazily; any
//! search that would be unbounded takes an explicit horizon.

pub mod error;
pub mod ershov;
pub mod formulas;
pub mod hammers;
pub mod randomness;
pub mod reductions;
pub mod streams;
pub mod util;

pub use error::{Error, Result};
pub use ershov::Delta2Approx;
pub use formulas::{Formula, ReductionClass};
pub use randomness::{ComplexityEstimator, EstimatorSpec};
pub use reductions::{TTReduction, UseBound};
pub use streams::{BitStream, IndexSet, StreamDesc, DEFAULT_HORIZON};
