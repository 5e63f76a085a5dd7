//! Propositional formulas over oracle positions: parsing, evaluation,
//! classification into reducibility classes, and CNF conversion.

mod ast;
mod classify;
mod cnf;
mod parse;
mod template;

pub use ast::Formula;
pub use classify::{belongs_to, classify, lattice_le, ReductionClass};
pub use cnf::{to_cnf, CNF_CLAUSE_LIMIT};
pub use parse::{parse, ParseError};
pub use template::{Affine, RowTemplate};
