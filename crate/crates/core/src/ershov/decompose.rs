use std::collections::{BTreeMap, BTreeSet};
use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::approx::{change_stages, Delta2Approx};
use crate::error::{Error, Result};

/// One level `(A_i, B_i)`: element ↦ stage at which it enters.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSets {
    #[serde(with = "crate::util::u64_keys")]
    pub a: BTreeMap<u64, u64>,
    #[serde(with = "crate::util::u64_keys")]
    pub b: BTreeMap<u64, u64>,
}

/// Nested c.e.-style sets `A_0 ⊇ B_0 ⊇ A_1 ⊇ B_1 ⊇ …`, given by entry stages.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageSetFamily {
    pub levels: Vec<LevelSets>,
    pub upto_stage: u64,
}

impl StageSetFamily {
    fn empty(k: u64, upto_stage: u64) -> Self {
        StageSetFamily {
            levels: vec![LevelSets::default(); k as usize],
            upto_stage,
        }
    }

    fn record(&mut self, x: u64, changes: &[u64]) {
        for (j, &stage) in changes.iter().enumerate() {
            let level = &mut self.levels[j / 2];
            if j % 2 == 0 {
                level.a.insert(x, stage);
            } else {
                level.b.insert(x, stage);
            }
        }
    }

    pub fn in_a(&self, i: usize, x: u64, stage: u64) -> bool {
        self.levels.get(i).and_then(|l| l.a.get(&x)).is_some_and(|&e| e <= stage)
    }

    pub fn in_b(&self, i: usize, x: u64, stage: u64) -> bool {
        self.levels.get(i).and_then(|l| l.b.get(&x)).is_some_and(|&e| e <= stage)
    }

    /// `⋃ (A_i ∖ B_i)` as enumerated by `stage`.
    pub fn reconstruct(&self, stage: u64) -> BTreeSet<u64> {
        let mut out = BTreeSet::new();
        for (i, l) in self.levels.iter().enumerate() {
            for &x in l.a.keys() {
                if self.in_a(i, x, stage) && !self.in_b(i, x, stage) {
                    out.insert(x);
                }
            }
        }
        out
    }

    /// Checks `A_0 ⊇ B_0 ⊇ A_1 ⊇ …` among elements enumerated by `stage`.
    pub fn nested_at(&self, stage: u64) -> bool {
        let xs: BTreeSet<u64> = self.levels.iter().flat_map(|l| l.a.keys().copied()).collect();
        xs.iter().all(|&x| {
            let chain: Vec<bool> = (0..self.levels.len())
                .flat_map(|i| [self.in_a(i, x, stage), self.in_b(i, x, stage)])
                .collect();
            chain.windows(2).all(|w| w[0] || !w[1])
        })
    }

    /// Elements with their membership pattern, as `x,level,set,stage` rows.
    pub fn rows(&self) -> Vec<(u64, usize, char, u64)> {
        let mut out = Vec::new();
        for (i, l) in self.levels.iter().enumerate() {
            out.extend(l.a.iter().map(|(&x, &s)| (x, i, 'A', s)));
            out.extend(l.b.iter().map(|(&x, &s)| (x, i, 'B', s)));
        }
        out.sort();
        out
    }
}

/// Split of a `(2k+1)`-c.e. approximation into its `≤ 2k`-change part and
/// the c.e. part holding elements with exactly `2k + 1` changes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OddDecomposition {
    pub even_part: StageSetFamily,
    #[serde(with = "crate::util::u64_keys")]
    pub ce_part: BTreeMap<u64, u64>,
}

impl OddDecomposition {
    pub fn reconstruct(&self, stage: u64) -> BTreeSet<u64> {
        let mut out = self.even_part.reconstruct(stage);
        out.extend(self.ce_part.iter().filter(|&(_, &e)| e <= stage).map(|(&x, _)| x));
        out
    }
}

fn checked_changes(a: &Delta2Approx, x: u64, upto: u64, bound: u64) -> Result<Vec<u64>> {
    let traj = a.trajectory(x, upto)?;
    if traj.first() == Some(&true) {
        return Err(Error::NonZeroStart { x });
    }
    let changes = change_stages(&traj);
    if changes.len() as u64 > bound {
        return Err(Error::ChangeBoundExceeded {
            x,
            count: changes.len() as u64,
            bound,
        });
    }
    Ok(changes)
}

/// `A_i = {x : count ≥ 2i+1}`, `B_i = {x : count ≥ 2i+2}` for `i < k`, with
/// entry at the stage where the threshold is first met.
pub fn decompose_even(a: &Delta2Approx, k: u64, xs: Range<u64>, upto_stage: u64) -> Result<StageSetFamily> {
    let mut fam = StageSetFamily::empty(k, upto_stage);
    for x in xs {
        let changes = checked_changes(a, x, upto_stage, 2 * k)?;
        fam.record(x, &changes);
    }
    Ok(fam)
}

pub fn decompose_odd(a: &Delta2Approx, k: u64, xs: Range<u64>, upto_stage: u64) -> Result<OddDecomposition> {
    let mut even_part = StageSetFamily::empty(k, upto_stage);
    let mut ce_part = BTreeMap::new();
    for x in xs {
        let changes = checked_changes(a, x, upto_stage, 2 * k + 1)?;
        if changes.len() as u64 == 2 * k + 1 {
            ce_part.insert(x, changes[changes.len() - 1]);
        } else {
            even_part.record(x, &changes);
        }
    }
    Ok(OddDecomposition { even_part, ce_part })
}

/// Even decomposition with `k` large enough for every probed count.
pub fn decompose_omega(a: &Delta2Approx, xs: Range<u64>, upto_stage: u64) -> Result<StageSetFamily> {
    let mut max = 0;
    for x in xs.clone() {
        max = max.max(a.mind_changes(x, upto_stage)?);
    }
    decompose_even(a, max.div_ceil(2), xs, upto_stage)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ershov::ApproxRule;

    fn table(rows: &[&str]) -> Delta2Approx {
        Delta2Approx::new(
            ApproxRule::Table {
                rows: rows.iter().map(|s| s.to_string()).collect(),
            },
            100,
        )
    }

    #[test]
    fn single_change_goes_to_a0() {
        let a = table(&["0011", "0000", "01"]);
        let fam = decompose_even(&a, 1, 0..3, 10).unwrap();
        assert_eq!(fam.levels[0].a.keys().copied().collect::<Vec<_>>(), vec![0, 2]);
        assert!(fam.levels[0].b.is_empty());
        assert_eq!(fam.reconstruct(9), BTreeSet::from([0, 2]));
    }

    #[test]
    fn alternating_then_stable() {
        let a = table(&["0101"]);
        let fam = decompose_even(&a, 2, 0..1, 10).unwrap();
        assert!(fam.in_a(0, 0, 9) && fam.in_b(0, 0, 9) && fam.in_a(1, 0, 9));
        assert!(!fam.in_b(1, 0, 9));
        assert!(fam.reconstruct(9).contains(&0));
        assert_eq!(fam.levels[1].a[&0], 3);
        assert!(fam.nested_at(2));
    }

    #[test]
    fn zero_and_errors() {
        let z = Delta2Approx::new(ApproxRule::Constant { bit: false }, 20);
        let fam = decompose_even(&z, 3, 0..50, 20).unwrap();
        assert!(fam.levels.iter().all(|l| l.a.is_empty() && l.b.is_empty()));
        assert!(fam.reconstruct(19).is_empty());
        let a = table(&["01010"]);
        assert!(matches!(
            decompose_even(&a, 1, 0..1, 10),
            Err(Error::ChangeBoundExceeded { count: 4, bound: 2, .. })
        ));
        assert!(matches!(decompose_even(&table(&["1"]), 1, 0..1, 5), Err(Error::NonZeroStart { x: 0 })));
    }

    #[test]
    fn odd_split() {
        let a = table(&["0101", "01", "0"]);
        let d = decompose_odd(&a, 1, 0..3, 10).unwrap();
        assert_eq!(d.ce_part, BTreeMap::from([(0, 3)]));
        assert_eq!(d.reconstruct(9), BTreeSet::from([0, 1]));
        let b = table(&["01", "0"]);
        assert!(decompose_odd(&b, 1, 0..2, 10).unwrap().ce_part.is_empty());
    }
}
