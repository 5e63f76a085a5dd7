use std::collections::HashSet;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{RowRule, UseBound};
use crate::error::{Error, Result};
use crate::formulas::{belongs_to, parse, Formula, ReductionClass};
use crate::streams::BitStream;

/// A truth-table reduction: a computable family of rows `n ↦ σ_n` tagged
/// with the class every row is supposed to belong to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TTReduction {
    pub rule: RowRule,
    pub declared_class: ReductionClass,
    /// Rows at or beyond this index are undefined.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_horizon: Option<u64>,
}

/// Outcome of [`TTReduction::verify_class`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCheck {
    pub holds: bool,
    pub counterexample: Option<u64>,
}

/// Outcome of [`TTReduction::check_wtt`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WttCheck {
    pub holds: bool,
    pub first_violation: Option<u64>,
}

#[derive(Debug, Deserialize, Serialize)]
struct CsvRow {
    row: u64,
    formula: String,
}

impl TTReduction {
    pub fn new(rule: RowRule, declared_class: ReductionClass) -> Self {
        TTReduction {
            rule,
            declared_class,
            declared_horizon: None,
        }
    }

    /// Reduction whose every row instantiates `template`.
    pub fn from_template(template: &str, declared_class: ReductionClass) -> Result<Self> {
        Ok(Self::new(RowRule::template(template)?, declared_class))
    }

    /// Rows `0..rows.len()` given explicitly.
    pub fn from_table(rows: Vec<Formula>, declared_class: ReductionClass) -> Self {
        let horizon = rows.len() as u64;
        TTReduction {
            rule: RowRule::Table { rows },
            declared_class,
            declared_horizon: Some(horizon),
        }
    }

    /// Effective row horizon: the declared one, capped by a finite table.
    pub fn horizon(&self) -> Option<u64> {
        match (self.declared_horizon, self.rule.len()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// Row `n`, without a class check.
    pub fn row(&self, n: u64) -> Result<Formula> {
        if let Some(h) = self.horizon() {
            if n >= h {
                return Err(Error::HorizonExceeded { position: n, horizon: h });
            }
        }
        self.rule.row(n)
    }

    /// Row `n`, rejected if it falls outside the declared class.
    pub fn checked_row(&self, n: u64) -> Result<Formula> {
        let f = self.row(n)?;
        if !belongs_to(&f, self.declared_class) {
            return Err(Error::ClassViolation {
                row: n,
                class: self.declared_class,
            });
        }
        Ok(f)
    }

    /// Increasing positions queried by row `n`.
    pub fn query_set(&self, n: u64) -> Result<Vec<u64>> {
        Ok(self.row(n)?.variables().into_iter().collect())
    }

    /// Bit `n` of the reduction applied to `oracle`.
    pub fn output_bit(&self, n: u64, oracle: &BitStream) -> Result<bool> {
        self.checked_row(n)?.evaluate(oracle)
    }

    /// The reduction applied to `oracle`, as a lazy stream.
    pub fn apply(&self, oracle: &BitStream) -> BitStream {
        BitStream::apply(self, oracle)
    }

    /// Checks rows `0..=upto` against the declared class; one-one
    /// reductions must also query pairwise distinct positions.
    pub fn verify_class(&self, upto: u64) -> Result<ClassCheck> {
        let mut used = HashSet::new();
        for n in 0..=upto {
            let row = self.row(n)?;
            let fresh = match (&row, self.declared_class) {
                (Formula::Var { pos }, ReductionClass::One) => used.insert(*pos),
                _ => true,
            };
            if !fresh || !belongs_to(&row, self.declared_class) {
                return Ok(ClassCheck {
                    holds: false,
                    counterexample: Some(n),
                });
            }
        }
        Ok(ClassCheck {
            holds: true,
            counterexample: None,
        })
    }

    /// Checks that every row `n ≤ upto` queries nothing above `bound(n)`.
    pub fn check_wtt(&self, bound: &UseBound, upto: u64) -> Result<WttCheck> {
        for n in 0..=upto {
            if let Some(&max) = self.query_set(n)?.last() {
                if max > bound.bound(n) {
                    return Ok(WttCheck {
                        holds: false,
                        first_violation: Some(n),
                    });
                }
            }
        }
        Ok(WttCheck {
            holds: true,
            first_violation: None,
        })
    }

    /// Reads a `row,formula` table. Rows must cover `0..len` exactly once.
    pub fn from_csv(reader: impl Read, declared_class: ReductionClass) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let mut rows: Vec<Option<Formula>> = Vec::new();
        for rec in rdr.deserialize() {
            let CsvRow { row, formula } = rec?;
            let idx = row as usize;
            if idx >= rows.len() {
                rows.resize(idx + 1, None);
            }
            if rows[idx].is_some() {
                return Err(Error::InvalidInput(format!("row {row} appears twice")));
            }
            rows[idx] = Some(parse(&formula)?);
        }
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(i, r)| r.ok_or_else(|| Error::InvalidInput(format!("row {i} is missing"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_table(rows, declared_class))
    }

    /// Writes rows `0..rows` as a `row,formula` table.
    pub fn to_csv(&self, rows: u64, writer: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for n in 0..rows {
            w.serialize(CsvRow {
                row: n,
                formula: self.row(n)?.to_string(),
            })?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}
