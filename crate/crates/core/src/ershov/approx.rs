use std::collections::BTreeMap;
use std::io::Read;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::util::{bit01, bits_from_str, bits_to_string};

/// How `f(x, s)` is computed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum ApproxRule {
    /// `f(x, s) = bit`.
    Constant {
        #[serde(with = "bit01")]
        bit: bool,
    },
    /// `f(x, s) = s mod 2`.
    Parity,
    /// `rows[x]` lists `f(x, 0), f(x, 1), …` as `0`/`1`; the last value is
    /// held at later stages and missing rows are all 0.
    Table { rows: Vec<String> },
    /// c.e. style: `x` enters at stage `entries[x]` and stays.
    CeEntries {
        #[serde(with = "crate::util::u64_keys")]
        entries: BTreeMap<u64, u64>,
    },
    /// `C ⊕_C ∅` for the co-c.e. set `C = ℕ ∖ W`, where each `y` in
    /// `1..universe` enters `W` with probability ½ at a pseudorandom stage.
    /// Changes at `x` are caused only by entries of `y ≤ x`, at most `x`.
    CoceJoinOver { seed: u64, universe: u64 },
}

/// A stage approximation `f(x, s)` defined for stages `s < stage_horizon`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Delta2Approx {
    pub rule: ApproxRule,
    pub stage_horizon: u64,
}

#[derive(Debug, Deserialize)]
struct CsvEntry {
    x: u64,
    s: u64,
    bit: u8,
}

impl Delta2Approx {
    pub fn new(rule: ApproxRule, stage_horizon: u64) -> Self {
        Delta2Approx { rule, stage_horizon }
    }

    /// Table from per-`x` trajectories.
    pub fn from_rows(rows: &[Vec<bool>], stage_horizon: u64) -> Self {
        Self::new(
            ApproxRule::Table {
                rows: rows.iter().map(|r| bits_to_string(r)).collect(),
            },
            stage_horizon,
        )
    }

    /// Reads `x,s,bit` rows. Unlisted stages repeat the previous listed
    /// value for that `x` (0 before the first).
    pub fn from_csv(reader: impl Read, stage_horizon: u64) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let mut points: BTreeMap<u64, BTreeMap<u64, bool>> = BTreeMap::new();
        for rec in rdr.deserialize() {
            let CsvEntry { x, s, bit } = rec?;
            if bit > 1 {
                return Err(Error::InvalidInput(format!("bit {bit} at x = {x}, s = {s}")));
            }
            points.entry(x).or_default().insert(s, bit == 1);
        }
        let width = points.values().filter_map(|m| m.keys().last()).max().map_or(0, |s| s + 1);
        let xs = points.keys().last().map_or(0, |x| x + 1);
        let mut rows = vec![vec![false; width as usize]; xs as usize];
        for (x, stages) in points {
            let row = &mut rows[x as usize];
            let mut cur = false;
            for (s, slot) in row.iter_mut().enumerate() {
                if let Some(&b) = stages.get(&(s as u64)) {
                    cur = b;
                }
                *slot = cur;
            }
        }
        Ok(Self::from_rows(&rows, stage_horizon))
    }

    /// `f(x, s)`.
    pub fn value(&self, x: u64, s: u64) -> Result<bool> {
        if s >= self.stage_horizon {
            return Err(Error::HorizonExceeded {
                position: s,
                horizon: self.stage_horizon,
            });
        }
        Ok(match &self.rule {
            ApproxRule::Constant { bit } => *bit,
            ApproxRule::Parity => s % 2 == 1,
            ApproxRule::Table { rows } => match rows.get(x as usize) {
                None => false,
                Some(row) => {
                    let bits = row.as_bytes();
                    match bits.len() {
                        0 => false,
                        len => bits[(s as usize).min(len - 1)] == b'1',
                    }
                }
            },
            ApproxRule::CeEntries { entries } => entries.get(&x).is_some_and(|&e| s >= e),
            ApproxRule::CoceJoinOver { seed, universe } => {
                let in_c = |y: u64| !coce_entry(*seed, *universe, self.stage_horizon, y).is_some_and(|e| e <= s);
                if !in_c(x) {
                    false
                } else {
                    let rank = (0..x).filter(|&y| in_c(y)).count() as u64;
                    in_c(rank)
                }
            }
        })
    }

    /// `f(x, 0), …, f(x, upto − 1)`.
    pub fn trajectory(&self, x: u64, upto: u64) -> Result<Vec<bool>> {
        (0..upto).map(|s| self.value(x, s)).collect()
    }

    /// Number of `s` with `s + 1 < upto` and `f(x, s) ≠ f(x, s + 1)`, i.e.
    /// the changes visible among stages `0..upto`.
    pub fn mind_changes(&self, x: u64, upto: u64) -> Result<u64> {
        Ok(change_stages(&self.trajectory(x, upto)?).len() as u64)
    }

    pub fn validate(&self) -> Result<()> {
        if let ApproxRule::Table { rows } = &self.rule {
            for r in rows {
                bits_from_str(r)?;
            }
        }
        if self.stage_horizon == 0 {
            return Err(Error::InvalidInput("stage horizon must be positive".into()));
        }
        Ok(())
    }
}

/// Stages `s + 1` at which the trajectory differs from stage `s`.
pub(crate) fn change_stages(traj: &[bool]) -> Vec<u64> {
    traj.windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] != w[1])
        .map(|(s, _)| s as u64 + 1)
        .collect()
}

fn coce_entry(seed: u64, universe: u64, stage_horizon: u64, y: u64) -> Option<u64> {
    if y == 0 || y >= universe {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ y.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    if rng.random_bool(0.5) {
        Some(rng.random_range(1..stage_horizon.max(2)))
    } else {
        None
    }
}
