use std::collections::BTreeMap;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::approx::Delta2Approx;
use crate::error::Result;
use crate::reductions::UseBound;

/// Outcome of checking `count(x) ≤ g(x)` over the probed range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaVerdict {
    pub bound: UseBound,
    pub consistent: bool,
    pub violations: Vec<u64>,
}

/// Horizon-relative mind-change report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CeLevelReport {
    pub upto_stage: u64,
    #[serde(with = "crate::util::u64_keys")]
    pub counts: BTreeMap<u64, u64>,
    pub max_count: u64,
    /// Probed `x` with `f(x, 0) = 1`.
    pub nonzero_start: Vec<u64>,
    /// `Some(max_count)` when every probed `x` starts at 0.
    pub n_ce: Option<u64>,
    pub omega: Option<OmegaVerdict>,
}

pub fn classify_ce_level(
    a: &Delta2Approx,
    xs: Range<u64>,
    upto_stage: u64,
    bound: Option<&UseBound>,
) -> Result<CeLevelReport> {
    let mut counts = BTreeMap::new();
    let mut nonzero_start = Vec::new();
    for x in xs {
        if upto_stage > 0 && a.value(x, 0)? {
            nonzero_start.push(x);
        }
        counts.insert(x, a.mind_changes(x, upto_stage)?);
    }
    let max_count = counts.values().copied().max().unwrap_or(0);
    let omega = bound.map(|g| {
        let violations: Vec<u64> = counts.iter().filter(|&(&x, &c)| c > g.bound(x)).map(|(&x, _)| x).collect();
        OmegaVerdict {
            bound: g.clone(),
            consistent: violations.is_empty(),
            violations,
        }
    });
    Ok(CeLevelReport {
        upto_stage,
        counts,
        max_count,
        n_ce: nonzero_start.is_empty().then_some(max_count),
        nonzero_start,
        omega,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ershov::ApproxRule;

    #[test]
    fn ce_table_is_one_ce() {
        let a = Delta2Approx::new(ApproxRule::CeEntries { entries: BTreeMap::from([(1, 3), (4, 7)]) }, 20);
        let r = classify_ce_level(&a, 0..10, 20, None).unwrap();
        assert_eq!(r.n_ce, Some(1));
        assert!(r.omega.is_none());
    }

    #[test]
    fn coce_join_is_omega_ce_under_identity() {
        let a = Delta2Approx::new(ApproxRule::CoceJoinOver { seed: 3, universe: 100 }, 300);
        let r = classify_ce_level(&a, 0..120, 300, Some(&UseBound::identity())).unwrap();
        assert!(r.omega.unwrap().consistent);
        assert!(r.nonzero_start.contains(&0));
    }

    #[test]
    fn nonzero_start_is_flagged() {
        let a = Delta2Approx::new(ApproxRule::Table { rows: vec!["0".into(), "10".into()] }, 10);
        let r = classify_ce_level(&a, 0..2, 10, None).unwrap();
        assert_eq!(r.nonzero_start, vec![1]);
        assert_eq!(r.n_ce, None);
    }
}
