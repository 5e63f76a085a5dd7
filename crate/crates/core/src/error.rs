use std::path::PathBuf;

use thiserror::Error;

use crate::formulas::{ParseError, ReductionClass};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("horizon exceeded: position {position} is beyond the available horizon {horizon}")]
    HorizonExceeded { position: u64, horizon: u64 },

    #[error("element {index} not found within horizon {horizon}")]
    NotFound { index: u64, horizon: u64 },

    #[error("position exhausted: selector has no {side} number {index} within horizon {horizon}")]
    PositionExhausted {
        side: &'static str,
        index: u64,
        horizon: u64,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("formula is not positive (only and/or over variables and constants are allowed)")]
    NotPositive,

    #[error("conjunctive normal form exceeds {limit} clauses")]
    CnfTooLarge { limit: usize },

    #[error("row {row} does not belong to declared class {class}")]
    ClassViolation { row: u64, class: ReductionClass },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("no rows querying a fresh bit were found below horizon {horizon}")]
    NoFreshBits { horizon: u64 },

    #[error("x = {x} changes its mind {count} times, more than the allowed {bound}")]
    ChangeBoundExceeded { x: u64, count: u64, bound: u64 },

    #[error("x = {x} starts at 1 at stage 0")]
    NonZeroStart { x: u64 },

    #[error("estimator failed: {0}")]
    Estimator(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
