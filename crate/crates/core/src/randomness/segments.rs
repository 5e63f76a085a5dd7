//! Segment schedules and the sequences built on them.

use serde::{Deserialize, Serialize};

use super::ComplexityEstimator;
use crate::error::Result;
use crate::reductions::UseBound;
use crate::streams::{BitStream, FillMode};

/// The schedule `s(k) = 2^(k²)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SegmentSchedule;

impl SegmentSchedule {
    /// Largest `k` with `s(k)` representable in a `u64`.
    pub const MAX_K: u32 = 7;

    /// `s(k)`; panics beyond [`Self::MAX_K`].
    pub fn start(k: u32) -> u64 {
        assert!(k <= Self::MAX_K, "2^(k^2) overflows for k = {k}");
        1u64 << (k * k)
    }

    /// `max{k : s(k) ≤ n}`; `None` for `n = 0`.
    pub fn k_of(n: u64) -> Option<u32> {
        (0..=Self::MAX_K).rev().find(|&k| Self::start(k) <= n)
    }

    /// `max{odd k : s(k) ≤ n}`; `None` below `s(1)`.
    pub fn k_odd_of(n: u64) -> Option<u32> {
        (0..=Self::MAX_K)
            .rev()
            .find(|&k| k % 2 == 1 && Self::start(k) <= n)
    }
}

/// The schedule `ℓ, λ` driven by a use bound `g`:
/// `ℓ(0) = λ(0) = 1`, `λ(k) = λ(k−1) + ℓ(k−1)` and `ℓ(k)` the least `2^(m²)`
/// exceeding `g(λ(k))`. Entries stop once the next value would overflow.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WttSchedule {
    pub ell: Vec<u64>,
    pub lambda: Vec<u64>,
}

fn least_square_power_above(x: u64) -> Option<u64> {
    (0u32..=7).map(|m| 1u64 << (m * m)).find(|&p| p > x)
}

impl WttSchedule {
    /// Builds the schedule from the monotone closure of `bound`, raised to
    /// at least the identity so that `ℓ` strictly increases.
    pub fn new(bound: &UseBound) -> Self {
        let g = |n: u64| bound.closure(n).max(n);
        let mut ell = vec![1u64];
        let mut lambda = vec![1u64];
        loop {
            let k = ell.len() - 1;
            let Some(lam) = lambda[k].checked_add(ell[k]) else { break };
            let Some(l) = least_square_power_above(g(lam)) else { break };
            lambda.push(lam);
            ell.push(l);
        }
        WttSchedule { ell, lambda }
    }

    /// Number of computed entries.
    pub fn len(&self) -> usize {
        self.ell.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ell.is_empty()
    }

    pub fn ell(&self, k: u32) -> u64 {
        self.ell[k as usize]
    }

    /// `max{k ≡ 2 (mod 3) : ℓ(k) ≤ n}` over the computed entries.
    pub fn k_mod3_of(&self, n: u64) -> Option<u32> {
        (0..self.ell.len())
            .rev()
            .find(|&k| k % 3 == 2 && self.ell[k] <= n)
            .map(|k| k as u32)
    }
}

/// `B(n) = r(n − s(k_n))·indicator(k_n)`, with 0 below `s(1)`.
pub fn segment_stream(r: &BitStream, indicator: &BitStream) -> BitStream {
    BitStream::segment(r, indicator)
}

/// Filler on odd segments selected by `x0 ⊕ x0`: where the selector bit is
/// 0 in zero-fill mode and where it is 1 in filler-fill mode.
pub fn double_segment_stream(filler: &BitStream, x0: &BitStream, mode: FillMode) -> BitStream {
    BitStream::double_segment(filler, x0, mode)
}

/// `X(n) = r(n − ℓ(k_n))·S(k_n)` with `k_n` the largest `k ≡ 2 (mod 3)`
/// having `ℓ(k) ≤ n` and `S` the three-way interleave of `s0` with itself.
pub fn wtt_stream(r: &BitStream, s0: &BitStream, bound: &UseBound) -> BitStream {
    BitStream::wtt_segment(r, s0, bound)
}

/// Ratios at the right endpoints of filler and zero segments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentContrast {
    pub filler_endpoints: Vec<(u64, f64)>,
    pub zero_endpoints: Vec<(u64, f64)>,
    pub filler_mean: f64,
    pub zero_mean: f64,
    pub difference: f64,
}

/// Evaluates `estimate/n` at `min(s(k+1), horizon)` for every segment `k`
/// starting below `horizon`, split by whether segment `k` carries filler.
/// Segment 0 lies in the leading region and always counts as a zero segment.
pub fn segment_contrast(
    e: &dyn ComplexityEstimator,
    filler: &BitStream,
    indicator: &BitStream,
    horizon: u64,
) -> Result<SegmentContrast> {
    let bits = segment_stream(filler, indicator).prefix(horizon)?;
    let est = e.estimate_prefixes(&bits, horizon)?;
    let mut filler_endpoints = Vec::new();
    let mut zero_endpoints = Vec::new();
    for k in 0..SegmentSchedule::MAX_K {
        if SegmentSchedule::start(k) >= horizon {
            break;
        }
        let end = SegmentSchedule::start(k + 1).min(horizon);
        let ratio = (est[end as usize].min(end)) as f64 / end as f64;
        if k > 0 && indicator.bit(u64::from(k))? {
            filler_endpoints.push((end, ratio));
        } else {
            zero_endpoints.push((end, ratio));
        }
    }
    let mean = |v: &[(u64, f64)]| {
        if v.is_empty() {
            0.0
        } else {
            v.iter().map(|p| p.1).sum::<f64>() / v.len() as f64
        }
    };
    let filler_mean = mean(&filler_endpoints);
    let zero_mean = mean(&zero_endpoints);
    Ok(SegmentContrast {
        filler_endpoints,
        zero_endpoints,
        filler_mean,
        zero_mean,
        difference: filler_mean - zero_mean,
    })
}
