use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulas::{Formula, RowTemplate};

/// How row `n` of a reduction is produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum RowRule {
    /// One template for every row.
    Template { template: RowTemplate },
    /// Row `n` instantiates `cases[n mod len]`.
    Cases { cases: Vec<RowTemplate> },
    /// Explicit rows; the table length is a hard horizon.
    Table { rows: Vec<Formula> },
    /// `base` with every variable in `zeros` replaced by the constant 0.
    Hardcoded { base: Box<RowRule>, zeros: BTreeSet<u64> },
}

impl RowRule {
    pub fn template(text: &str) -> Result<Self> {
        Ok(RowRule::Template {
            template: RowTemplate::parse(text)?,
        })
    }

    /// Number of rows the rule defines, if finite.
    pub fn len(&self) -> Option<u64> {
        match self {
            RowRule::Template { .. } | RowRule::Cases { .. } => None,
            RowRule::Table { rows } => Some(rows.len() as u64),
            RowRule::Hardcoded { base, .. } => base.len(),
        }
    }

    pub fn row(&self, n: u64) -> Result<Formula> {
        match self {
            RowRule::Template { template } => template.instantiate(n),
            RowRule::Cases { cases } => {
                if cases.is_empty() {
                    return Err(Error::InvalidInput("case rule has no cases".into()));
                }
                cases[(n % cases.len() as u64) as usize].instantiate(n)
            }
            RowRule::Table { rows } => rows.get(n as usize).cloned().ok_or(Error::HorizonExceeded {
                position: n,
                horizon: rows.len() as u64,
            }),
            RowRule::Hardcoded { base, zeros } => Ok(base
                .row(n)?
                .substitute(&|p| zeros.contains(&p).then_some(false))),
        }
    }
}
