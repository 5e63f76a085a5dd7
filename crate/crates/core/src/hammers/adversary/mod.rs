//! Constructions of oracles in `Either(random)` on which a given positive,
//! linear or bounded truth-table reduction visibly fails to produce a
//! bi-immune output: a computable set of rows all receive the same value.
//!
//! "Infinitely many rows" becomes "at least `threshold` rows below the
//! horizon"; when a case split cannot be settled that way the outcome is
//! [`AdversaryOutcome::Inconclusive`].

mod btt;
mod linear;
mod positive;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use btt::adversary_btt;
pub use linear::adversary_linear;
pub use positive::adversary_positive;

use crate::error::{Error, Result};
use crate::formulas::{belongs_to, Formula, ReductionClass};
use crate::reductions::TTReduction;
use crate::streams::{BitStream, DEFAULT_HORIZON};

/// Search parameters shared by the adversaries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdversaryConfig {
    /// Rows `0..horizon` are scanned.
    pub horizon: u64,
    /// Witness rows needed before a case is accepted.
    pub threshold: usize,
    /// Rows the greedy search may pass without progress before stalling.
    pub greedy_search_rows: u64,
    /// Seed of the pseudorandom half of every constructed oracle.
    pub seed: u64,
}

impl AdversaryConfig {
    pub const DEFAULT_THRESHOLD: usize = 32;

    pub fn new(horizon: u64, seed: u64) -> Self {
        AdversaryConfig {
            horizon,
            threshold: Self::DEFAULT_THRESHOLD,
            greedy_search_rows: horizon.saturating_mul(4),
            seed,
        }
    }
}

impl Default for AdversaryConfig {
    fn default() -> Self {
        Self::new(DEFAULT_HORIZON, 0)
    }
}

/// Which half of a join an argument refers to; even is the first summand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(pos: u64) -> Parity {
        if pos % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn other(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    /// `fixed ⊕ random` when `self` is even, `random ⊕ fixed` when odd.
    pub(crate) fn oracle(self, fixed: &BitStream, seed: u64) -> BitStream {
        let random = BitStream::prng(seed);
        match self {
            Parity::Even => BitStream::join(fixed, &random),
            Parity::Odd => BitStream::join(&random, fixed),
        }
    }
}

/// Why the witness holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum Certificate {
    /// Every CNF clause of each witness row contains a variable of
    /// `parity` (or the constant 1); those bits are all 1.
    PositiveAllClausesTouch { parity: Parity },
    /// Each witness row has a CNF clause with no variable of `parity`
    /// (and no constant 1); the other half is all 0.
    PositiveUntouchedClause { parity: Parity },
    /// Each witness row had a fresh bit of `parity`; `flipped` lists the
    /// fresh bits set to 1 to make the row evaluate to 1.
    LinearFreshBits { parity: Parity, flipped: Vec<u64> },
    /// Each witness row has the same value whatever the `parity`-half
    /// leaves free, once that half is all 0.
    BttDetermined { parity: Parity },
    /// Witness rows have pairwise disjoint query sets and even-bit
    /// assignments (`set` lists the 1s) forcing the value.
    BttEvenControl { set: Vec<u64> },
    /// Witness rows have pairwise disjoint query sets; given the
    /// pseudorandom even half, odd bits (`set` lists the 1s) force the value.
    BttOddAssignment { set: Vec<u64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdversaryWitness {
    pub oracle: BitStream,
    /// Increasing row indices.
    pub witness: Vec<u64>,
    pub forced: bool,
    pub certificate: Certificate,
    /// Positions cleared while recursing on bounded reductions.
    #[serde(default)]
    pub hardcoded: Vec<u64>,
    /// Recursion depth at which the witness was found.
    #[serde(default)]
    pub depth: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum AdversaryOutcome {
    Witness(AdversaryWitness),
    Inconclusive { reason: String },
}

impl AdversaryOutcome {
    pub fn witness(&self) -> Option<&AdversaryWitness> {
        match self {
            AdversaryOutcome::Witness(w) => Some(w),
            AdversaryOutcome::Inconclusive { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCheck {
    pub holds: bool,
    pub checked: usize,
    pub first_failure: Option<u64>,
}

impl AdversaryWitness {
    /// Re-applies `r` to the oracle and checks the forced value at every
    /// witness row, and that there are at least `min_witnesses` of them.
    pub fn verify(&self, r: &TTReduction, min_witnesses: usize) -> Result<WitnessCheck> {
        let output = r.apply(&self.oracle);
        for &n in &self.witness {
            if output.bit(n)? != self.forced {
                return Ok(WitnessCheck {
                    holds: false,
                    checked: self.witness.len(),
                    first_failure: Some(n),
                });
            }
        }
        Ok(WitnessCheck {
            holds: self.witness.len() >= min_witnesses,
            checked: self.witness.len(),
            first_failure: None,
        })
    }
}

/// Which adversary applies to a declared class.
pub fn adversary_for(r: &TTReduction, cfg: &AdversaryConfig) -> Result<AdversaryOutcome> {
    use ReductionClass::*;
    match r.declared_class {
        One | ManyOne | Conjunctive | Disjunctive | Positive => adversary_positive(r, cfg),
        Linear => adversary_linear(r, cfg),
        Btt(c) => adversary_btt(r, c, cfg),
        BttAny | Tt => Err(Error::Precondition(format!(
            "no adversary for reductions declared {}",
            r.declared_class
        ))),
    }
}

/// Rows `0..horizon`, each required to belong to `class`.
pub(crate) fn rows_in_class(r: &TTReduction, class: ReductionClass, horizon: u64) -> Result<Vec<Formula>> {
    (0..horizon)
        .map(|n| {
            let f = r.row(n)?;
            if !belongs_to(&f, class) {
                return Err(Error::Precondition(format!("row {n} is not {class}: {f}")));
            }
            Ok(f)
        })
        .collect()
}

/// Whether `f` has one value over all assignments of the variables not
/// fixed by `fixed`. Returns that value. Exhaustive, so keep `f` small.
pub(crate) fn determined_value(f: &Formula, fixed: &impl Fn(u64) -> Option<bool>) -> Option<bool> {
    let free: Vec<u64> = f.variables().into_iter().filter(|&p| fixed(p).is_none()).collect();
    assert!(free.len() <= 20, "too many free variables to enumerate");
    let eval = |mask: u64| {
        f.eval_assignment(|p| match fixed(p) {
            Some(b) => b,
            None => {
                let i = free.iter().position(|&q| q == p).expect("free variable");
                mask >> i & 1 == 1
            }
        })
    };
    let first = eval(0);
    (1..1u64 << free.len()).all(|m| eval(m) == first).then_some(first)
}

pub(crate) fn sorted(set: BTreeSet<u64>) -> Vec<u64> {
    set.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::parse;

    #[test]
    fn determined_values() {
        let f = parse("v0 & v1").unwrap();
        assert_eq!(determined_value(&f, &|p| (p == 0).then_some(false)), Some(false));
        assert_eq!(determined_value(&f, &|p| (p == 0).then_some(true)), None);
        assert_eq!(determined_value(&parse("1").unwrap(), &|_| None), Some(true));
    }

    #[test]
    fn parity_oracles() {
        let o = Parity::Even.oracle(&BitStream::ones(), 4);
        let r = BitStream::prng(4);
        for k in 0..100 {
            assert!(o.bit(2 * k).unwrap());
            assert_eq!(o.bit(2 * k + 1).unwrap(), r.bit(k).unwrap());
        }
    }
}
