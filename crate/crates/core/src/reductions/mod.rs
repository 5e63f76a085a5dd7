//! Truth-table reductions as computable formula families.

mod reduction;
mod rule;
mod use_bound;

pub use reduction::{ClassCheck, TTReduction, WttCheck};
pub use rule::RowRule;
pub use use_bound::UseBound;
