//! The switching reduction: follow one column of the input, and move to
//! the next column whenever the tracked column's estimated randomness
//! deficiency exceeds the current floor.
//!
//! At stage `s` the output bit is bit `s` of column `π(pointer)`. The
//! trigger for stage `s + 1` is
//! `∃ n ≤ s+1 : K̂_{s+1}(column↾n) < n − c`, where `c` is the current
//! floor. When it fires, both the floor and the pointer advance by one.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::randomness::ComplexityEstimator;
use crate::streams::{pair_decode, BitStream, Family};

/// Number of columns: finite, or one per natural.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Arity {
    Finite(u64),
    Omega,
}

impl Arity {
    /// `π(k)`: `k mod α` for finite `α`, the first coordinate of the
    /// unpairing of `k` for `ω`. Every column has infinitely many preimages.
    pub fn column_of(&self, k: u64) -> u64 {
        match self {
            Arity::Finite(a) => k % a,
            Arity::Omega => pair_decode(k).0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwitchEvent {
    /// First stage read from the new column.
    pub stage: u64,
    pub old_column: u64,
    pub new_column: u64,
    pub floor_before: u64,
    /// Least prefix length witnessing the trigger.
    pub witness_length: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwitchTrace {
    pub arity: Arity,
    pub horizon: u64,
    pub estimator: String,
    pub events: Vec<SwitchEvent>,
    pub final_pointer: u64,
    pub final_floor: u64,
    pub final_column: u64,
}

impl SwitchTrace {
    /// Stage from which the output follows the final column.
    pub fn settled_from(&self) -> u64 {
        self.events.last().map_or(0, |e| e.stage)
    }
}

#[derive(Debug, Clone)]
pub struct SwitchRun {
    /// Stages `0..horizon` as computed, continued by the final column.
    pub output: BitStream,
    pub trace: SwitchTrace,
}

fn validate(arity: Arity, horizon: u64) -> Result<()> {
    if arity == Arity::Finite(0) {
        return Err(Error::InvalidInput("arity must be at least 1".into()));
    }
    if horizon == 0 {
        return Err(Error::InvalidInput("horizon must be positive".into()));
    }
    Ok(())
}

/// Estimates of every prefix of a column at one epoch.
struct ColumnCache<'a> {
    columns: &'a Family,
    e: &'a dyn ComplexityEstimator,
    len: u64,
    bits: HashMap<u64, Arc<Vec<bool>>>,
    estimates: HashMap<(u64, u64), Arc<Vec<u64>>>,
}

impl<'a> ColumnCache<'a> {
    fn new(columns: &'a Family, e: &'a dyn ComplexityEstimator, len: u64) -> Self {
        ColumnCache {
            columns,
            e,
            len,
            bits: HashMap::new(),
            estimates: HashMap::new(),
        }
    }

    fn bits(&mut self, column: u64) -> Result<Arc<Vec<bool>>> {
        if let Some(b) = self.bits.get(&column) {
            return Ok(b.clone());
        }
        let b = Arc::new(self.columns.member(column)?.prefix(self.len)?);
        self.bits.insert(column, b.clone());
        Ok(b)
    }

    /// `estimate(column↾n, stage)` for `n ≤ len`.
    fn estimates(&mut self, column: u64, stage: u64) -> Result<Arc<Vec<u64>>> {
        let key = (column, self.e.epoch(stage));
        if let Some(v) = self.estimates.get(&key) {
            return Ok(v.clone());
        }
        let bits = self.bits(column)?;
        let v = Arc::new(self.e.estimate_prefixes(&bits, stage)?);
        self.estimates.insert(key, v.clone());
        Ok(v)
    }
}

/// Runs the switching reduction for stages `0..horizon`.
pub fn switching_reduction(
    columns: &Family,
    arity: Arity,
    e: &dyn ComplexityEstimator,
    horizon: u64,
) -> Result<SwitchRun> {
    validate(arity, horizon)?;
    let mut cache = ColumnCache::new(columns, e, horizon);
    // running max of n − K̂(column↾n), keyed like the estimates
    let mut excess: HashMap<(u64, u64), Vec<i64>> = HashMap::new();
    let mut floor = 0u64;
    let mut pointer = 0u64;
    let mut events = Vec::new();
    for s in 0..horizon.saturating_sub(1) {
        let column = arity.column_of(pointer);
        let stage = s + 1;
        let key = (column, e.epoch(stage));
        if !excess.contains_key(&key) {
            let est = cache.estimates(column, stage)?;
            let mut best = i64::MIN;
            let running = est
                .iter()
                .enumerate()
                .map(|(n, &k)| {
                    best = best.max(n as i64 - k as i64);
                    best
                })
                .collect();
            excess.insert(key, running);
        }
        if excess[&key][stage as usize] > floor as i64 {
            let est = cache.estimates(column, stage)?;
            let witness = (0..=stage)
                .find(|&n| (est[n as usize] as i64) < n as i64 - floor as i64)
                .expect("running maximum guarantees a witness");
            let next = arity.column_of(pointer + 1);
            events.push(SwitchEvent {
                stage,
                old_column: column,
                new_column: next,
                floor_before: floor,
                witness_length: witness,
            });
            floor += 1;
            pointer += 1;
        }
    }
    let mut pieces = vec![(0, columns.member(arity.column_of(0))?)];
    for ev in &events {
        pieces.push((ev.stage, columns.member(ev.new_column)?));
    }
    let output = BitStream::splice(pieces)?;
    let final_column = arity.column_of(pointer);
    Ok(SwitchRun {
        output,
        trace: SwitchTrace {
            arity,
            horizon,
            estimator: e.name(),
            events,
            final_pointer: pointer,
            final_floor: floor,
            final_column,
        },
    })
}

/// Replays the trigger predicate by direct scanning, without the running
/// maxima used by [`switching_reduction`]. Returns the switch events.
pub fn recheck_triggers(
    columns: &Family,
    arity: Arity,
    e: &dyn ComplexityEstimator,
    horizon: u64,
) -> Result<Vec<SwitchEvent>> {
    validate(arity, horizon)?;
    let mut cache = ColumnCache::new(columns, e, horizon);
    let mut floor = 0u64;
    let mut pointer = 0u64;
    let mut events = Vec::new();
    for s in 0..horizon.saturating_sub(1) {
        let column = arity.column_of(pointer);
        let est = cache.estimates(column, s + 1)?;
        let hit = (0..=s + 1).find(|&n| est[n as usize].saturating_add(floor) < n);
        if let Some(n) = hit {
            events.push(SwitchEvent {
                stage: s + 1,
                old_column: column,
                new_column: arity.column_of(pointer + 1),
                floor_before: floor,
                witness_length: n,
            });
            floor += 1;
            pointer += 1;
        }
    }
    Ok(events)
}

/// Checks that from the last switch on, the output equals the final
/// column bit for bit below `horizon`.
pub fn suffix_agrees(run: &SwitchRun, columns: &Family) -> Result<bool> {
    let tracked = columns.member(run.trace.final_column)?;
    for n in run.trace.settled_from()..run.trace.horizon {
        if run.output.bit(n)? != tracked.bit(n)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randomness::{Compressor, LengthEstimator, ZeroEstimator};
    use crate::streams::FamilyDesc;

    fn family(members: Vec<BitStream>) -> Family {
        Family::cycle(members).unwrap()
    }

    #[test]
    fn single_column_is_copied() {
        let fam = family(vec![BitStream::prng(5)]);
        let run = switching_reduction(&fam, Arity::Finite(1), &ZeroEstimator, 600).unwrap();
        assert!(!run.trace.events.is_empty());
        assert_eq!(run.output.prefix(600).unwrap(), BitStream::prng(5).prefix(600).unwrap());
    }

    #[test]
    fn identical_columns() {
        let s = BitStream::periodic("0010111").unwrap();
        let fam = family(vec![s.clone(), s.clone(), s.clone()]);
        let run = switching_reduction(&fam, Arity::Finite(3), &Compressor::default(), 2048).unwrap();
        assert_eq!(run.output.prefix(2048).unwrap(), s.prefix(2048).unwrap());
    }

    #[test]
    fn ideal_estimator_never_switches() {
        let fam = family(vec![BitStream::zeros(), BitStream::ones()]);
        let run = switching_reduction(&fam, Arity::Finite(2), &LengthEstimator, 500).unwrap();
        assert!(run.trace.events.is_empty());
    }

    #[test]
    fn zero_column_then_random_column() {
        let fam = family(vec![BitStream::zeros(), BitStream::prng(11)]);
        let e = Compressor::default();
        let run = switching_reduction(&fam, Arity::Finite(2), &e, 4096).unwrap();
        assert_eq!(run.trace.events.len(), 1);
        assert_eq!(run.trace.final_column, 1);
        assert_eq!(recheck_triggers(&fam, Arity::Finite(2), &e, 4096).unwrap(), run.trace.events);
        assert!(suffix_agrees(&run, &fam).unwrap());
    }

    #[test]
    fn omega_columns() {
        let fam = Family::from_desc(&FamilyDesc::Prng { base_seed: 3 }).unwrap();
        let e = Compressor::default();
        let run = switching_reduction(&fam, Arity::Omega, &e, 1024).unwrap();
        assert_eq!(recheck_triggers(&fam, Arity::Omega, &e, 1024).unwrap(), run.trace.events);
        assert_eq!(Arity::Omega.column_of(crate::streams::pair_encode(4, 9)), 4);
    }

    #[test]
    fn arity_zero_is_rejected() {
        let fam = family(vec![BitStream::zeros()]);
        assert!(switching_reduction(&fam, Arity::Finite(0), &ZeroEstimator, 10).is_err());
    }
}
