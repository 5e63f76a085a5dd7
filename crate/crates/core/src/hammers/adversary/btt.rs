use std::collections::BTreeSet;

use super::{
    determined_value, rows_in_class, sorted, AdversaryConfig, AdversaryOutcome, AdversaryWitness,
    Certificate, Parity,
};
use crate::error::{Error, Result};
use crate::formulas::{Formula, ReductionClass};
use crate::reductions::{RowRule, TTReduction};
use crate::streams::BitStream;

// rows with more free variables than this are never enumerated
const MAX_ENUMERATED: usize = 16;

struct Search<'a> {
    base: &'a RowRule,
    limit: Option<u64>,
    cfg: &'a AdversaryConfig,
}

impl Search<'_> {
    fn row(&self, rule: &RowRule, n: u64) -> Result<Option<Formula>> {
        if self.limit.is_some_and(|h| n >= h) {
            return Ok(None);
        }
        match rule.row(n) {
            Ok(f) => Ok(Some(f)),
            Err(Error::HorizonExceeded { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }

    fn witness(
        &self,
        oracle: BitStream,
        hard: &BTreeSet<u64>,
        witness: Vec<u64>,
        forced: bool,
        certificate: Certificate,
        depth: u32,
    ) -> Result<AdversaryOutcome> {
        Ok(AdversaryOutcome::Witness(AdversaryWitness {
            oracle: oracle.overlay(Vec::new(), sorted(hard.clone()))?,
            witness,
            forced,
            certificate,
            hardcoded: sorted(hard.clone()),
            depth,
        }))
    }

    fn level(&self, c: u32, start: u64, hard: BTreeSet<u64>, depth: u32) -> Result<AdversaryOutcome> {
        let rule = if hard.is_empty() {
            self.base.clone()
        } else {
            RowRule::Hardcoded {
                base: Box::new(self.base.clone()),
                zeros: hard.clone(),
            }
        };
        if c <= 1 {
            return self.determined(&rule, start, &hard, depth);
        }

        // greedy search for pairwise disjoint query sets
        let cfg = self.cfg;
        let window_end = start.saturating_add(cfg.horizon);
        let mut used: BTreeSet<u64> = BTreeSet::new();
        let mut found: Vec<(u64, Formula)> = Vec::new();
        let mut last_progress = start;
        let mut n = start;
        let stalled = loop {
            if n >= window_end && found.len() >= cfg.threshold {
                break false;
            }
            if n - last_progress > cfg.greedy_search_rows {
                break true;
            }
            let Some(f) = self.row(&rule, n)? else {
                break found.len() < cfg.threshold;
            };
            let vars = f.variables();
            if vars.len() <= c as usize && vars.is_disjoint(&used) {
                used.extend(vars);
                found.push((n, f));
                last_progress = n;
            }
            n += 1;
        };

        if stalled {
            let Some(&(last, _)) = found.last() else {
                return Ok(AdversaryOutcome::Inconclusive {
                    reason: format!("no row with at most {c} free variables from row {start}"),
                });
            };
            log::debug!(
                "greedy stalled after {} sets at depth {depth}; hard-coding {} bits",
                found.len(),
                used.len()
            );
            let mut next = hard;
            next.extend(used);
            return self.level(c - 1, last + 1, next, depth + 1);
        }

        if let Some(out) = self.even_control(&found, &hard, depth)? {
            return Ok(out);
        }
        if let Some(out) = self.odd_assignment(&found, &hard, depth)? {
            return Ok(out);
        }
        Ok(AdversaryOutcome::Inconclusive {
            reason: format!(
                "{} disjoint rows found at depth {depth}, but fewer than {} can be forced to one value",
                found.len(),
                cfg.threshold
            ),
        })
    }

    /// Base case: rows whose value is fixed once one half is all 0.
    fn determined(&self, rule: &RowRule, start: u64, hard: &BTreeSet<u64>, depth: u32) -> Result<AdversaryOutcome> {
        let mut tallies: [Vec<u64>; 4] = Default::default();
        let cases = [
            (Parity::Even, false),
            (Parity::Even, true),
            (Parity::Odd, false),
            (Parity::Odd, true),
        ];
        for n in start..start.saturating_add(self.cfg.horizon) {
            let Some(f) = self.row(rule, n)? else { break };
            if f.variables().len() > MAX_ENUMERATED {
                continue;
            }
            for parity in [Parity::Even, Parity::Odd] {
                if let Some(v) = determined_value(&f, &|p| (Parity::of(p) == parity).then_some(false)) {
                    let i = cases.iter().position(|&c| c == (parity, v)).expect("listed case");
                    tallies[i].push(n);
                }
            }
        }
        let best = (0..4).fold(0, |b, i| if tallies[i].len() > tallies[b].len() { i } else { b });
        if tallies[best].len() < self.cfg.threshold {
            return Ok(AdversaryOutcome::Inconclusive {
                reason: format!(
                    "only {} determined rows from row {start} at depth {depth}",
                    tallies[best].len()
                ),
            });
        }
        let (parity, forced) = cases[best];
        let oracle = parity.oracle(&BitStream::zeros(), self.cfg.seed);
        let rows = std::mem::take(&mut tallies[best]);
        self.witness(oracle, hard, rows, forced, Certificate::BttDetermined { parity }, depth)
    }

    /// Rows whose even bits alone can force one value.
    fn even_control(&self, found: &[(u64, Formula)], hard: &BTreeSet<u64>, depth: u32) -> Result<Option<AdversaryOutcome>> {
        let mut per_value: [(Vec<u64>, BTreeSet<u64>); 2] = Default::default();
        for (n, f) in found {
            let evens: Vec<u64> = f.variables().into_iter().filter(|p| p % 2 == 0).collect();
            for v in [false, true] {
                let control = (0..1u64 << evens.len()).find(|mask| {
                    let assign = |p: u64| evens.iter().position(|&q| q == p).map(|i| mask >> i & 1 == 1);
                    determined_value(f, &assign) == Some(v)
                });
                if let Some(mask) = control {
                    let slot = &mut per_value[usize::from(v)];
                    slot.0.push(*n);
                    slot.1.extend(evens.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p));
                }
            }
        }
        let v = per_value[1].0.len() > per_value[0].0.len();
        let (rows, ones) = std::mem::take(&mut per_value[usize::from(v)]);
        if rows.len() < self.cfg.threshold {
            return Ok(None);
        }
        let set = sorted(ones);
        let oracle = Parity::Even.oracle(&BitStream::zeros(), self.cfg.seed).overlay(set.clone(), Vec::new())?;
        self.witness(oracle, hard, rows, v, Certificate::BttEvenControl { set }, depth)
            .map(Some)
    }

    /// Given the pseudorandom even half, choose odd bits row by row.
    fn odd_assignment(&self, found: &[(u64, Formula)], hard: &BTreeSet<u64>, depth: u32) -> Result<Option<AdversaryOutcome>> {
        let base = Parity::Odd.oracle(&BitStream::zeros(), self.cfg.seed);
        let mut per_value: [(Vec<u64>, BTreeSet<u64>); 2] = Default::default();
        for (n, f) in found {
            let vars = f.variables();
            let odds: Vec<u64> = vars.iter().copied().filter(|p| p % 2 == 1).collect();
            let evens: Vec<(u64, bool)> = vars
                .iter()
                .filter(|&&p| p % 2 == 0)
                .map(|&p| Ok((p, base.bit(p)?)))
                .collect::<Result<_>>()?;
            for v in [false, true] {
                let hit = (0..1u64 << odds.len()).find(|mask| {
                    f.eval_assignment(|p| match odds.iter().position(|&q| q == p) {
                        Some(i) => mask >> i & 1 == 1,
                        None => evens.iter().find(|e| e.0 == p).is_some_and(|e| e.1),
                    }) == v
                });
                if let Some(mask) = hit {
                    let slot = &mut per_value[usize::from(v)];
                    slot.0.push(*n);
                    slot.1.extend(odds.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p));
                }
            }
        }
        let v = per_value[1].0.len() >= per_value[0].0.len();
        let (rows, ones) = std::mem::take(&mut per_value[usize::from(v)]);
        if rows.len() < self.cfg.threshold {
            return Ok(None);
        }
        let set = sorted(ones);
        let oracle = base.overlay(set.clone(), Vec::new())?;
        self.witness(oracle, hard, rows, v, Certificate::BttOddAssignment { set }, depth)
            .map(Some)
    }
}

/// Adversary for reductions with at most `c` queries per row.
///
/// Greedily collects rows with pairwise disjoint query sets. If that
/// stalls, the bits queried so far are hard-coded to 0 (every later row
/// meets them, so at most `c − 1` free queries remain) and the search
/// recurses; the final oracle clears those bits. Otherwise the disjoint
/// rows are forced through their even bits if possible, else through
/// their odd bits against the pseudorandom even half. For `c ≤ 1`, rows
/// whose value is fixed by zeroing one half serve as witnesses.
pub fn adversary_btt(r: &TTReduction, c: u32, cfg: &AdversaryConfig) -> Result<AdversaryOutcome> {
    rows_in_class(r, ReductionClass::Btt(c), cfg.horizon)?;
    let search = Search {
        base: &r.rule,
        limit: r.horizon(),
        cfg,
    };
    search.level(c, 0, BTreeSet::new(), 0)
}
