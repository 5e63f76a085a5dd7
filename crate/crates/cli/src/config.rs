use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use ttlab::hammers::adversary::AdversaryConfig;
use ttlab::{EstimatorSpec, DEFAULT_HORIZON};

/// Everything that determines an experiment's output. Saved next to the
/// artifacts so a run can be repeated exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub horizon: u64,
    pub seed: u64,
    pub estimator: EstimatorSpec,
    pub threshold: usize,
    /// Greedy stall window of the bounded adversary; `4·horizon` if unset.
    pub greedy_search_rows: Option<u64>,
    pub out: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            horizon: DEFAULT_HORIZON,
            seed: 0,
            estimator: EstimatorSpec::default(),
            threshold: AdversaryConfig::DEFAULT_THRESHOLD,
            greedy_search_rows: None,
            out: PathBuf::from("ttlab-out"),
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn adversary(&self) -> AdversaryConfig {
        let mut cfg = AdversaryConfig::new(self.horizon, self.seed);
        cfg.threshold = self.threshold;
        if let Some(rows) = self.greedy_search_rows {
            cfg.greedy_search_rows = rows;
        }
        cfg
    }
}
