//! The default complexity estimator: a decodable code choosing the
//! cheapest of three encodings.
//!
//! Every code starts with 2 flag bits and an Elias-gamma header for
//! `len + 1`, followed by one of:
//!
//! * raw: the bits themselves;
//! * run-length: the first bit, then a gamma code per run (the last run
//!   may be cut short by the end of the string);
//! * LZ78 with a capped dictionary: per phrase, a pointer of
//!   `⌈log₂ d⌉` bits into the `d`-entry dictionary plus one literal bit;
//!   a trailing partial phrase is just a pointer.
//!
//! The stage selects the dictionary cap: level `L = ⌊log₂(stage+1)⌋`
//! (capped) allows `2^(L+2)` entries, and the LZ cost is the minimum over
//! all levels up to `L`, so estimates never increase with the stage.

use super::estimator::{ceil_log2, ComplexityEstimator};
use crate::error::Result;

/// Elias-gamma code length of `m ≥ 1`.
pub(crate) fn gamma_len(m: u64) -> u64 {
    debug_assert!(m >= 1);
    2 * u64::from(63 - m.leading_zeros()) + 1
}

/// Compressor-backed estimator; see the module docs for the code.
#[derive(Debug, Clone, Copy)]
pub struct Compressor {
    max_level: u32,
}

impl Default for Compressor {
    fn default() -> Self {
        Compressor::new(Self::DEFAULT_MAX_LEVEL)
    }
}

impl Compressor {
    pub const DEFAULT_MAX_LEVEL: u32 = 20;

    pub fn new(max_level: u32) -> Self {
        Compressor {
            max_level: max_level.min(40),
        }
    }

    /// Effort level used at `stage`.
    pub fn level(&self, stage: u64) -> u32 {
        let l = 63 - stage.saturating_add(1).leading_zeros();
        l.min(self.max_level)
    }

    fn dictionary_cap(level: u32) -> usize {
        1usize << (level + 2)
    }
}

fn rle_prefix_costs(bits: &[bool]) -> Vec<u64> {
    let mut out = Vec::with_capacity(bits.len() + 1);
    out.push(0);
    let mut closed = 1u64;
    let mut run = 0u64;
    let mut prev = None;
    for &b in bits {
        if prev == Some(b) {
            run += 1;
        } else {
            if run > 0 {
                closed += gamma_len(run);
            }
            run = 1;
            prev = Some(b);
        }
        out.push(closed + gamma_len(run));
    }
    out
}

fn lz_prefix_costs(bits: &[bool], cap: usize) -> Vec<u64> {
    const NONE: u32 = u32::MAX;
    let mut nodes: Vec<[u32; 2]> = vec![[NONE; 2]];
    let mut out = Vec::with_capacity(bits.len() + 1);
    out.push(0);
    let mut completed = 0u64;
    let mut cur = 0usize;
    for &b in bits {
        let next = nodes[cur][usize::from(b)];
        let pointer = ceil_log2(nodes.len() as u64);
        if next != NONE {
            cur = next as usize;
            out.push(completed + pointer);
        } else {
            completed += pointer + 1;
            if nodes.len() < cap {
                nodes[cur][usize::from(b)] = nodes.len() as u32;
                nodes.push([NONE; 2]);
            }
            cur = 0;
            out.push(completed);
        }
    }
    out
}

impl ComplexityEstimator for Compressor {
    fn name(&self) -> String {
        "compressor".into()
    }

    fn estimate(&self, bits: &[bool], stage: u64) -> Result<u64> {
        Ok(*self
            .estimate_prefixes(bits, stage)?
            .last()
            .expect("at least the empty prefix"))
    }

    fn estimate_prefixes(&self, bits: &[bool], stage: u64) -> Result<Vec<u64>> {
        let mut best = rle_prefix_costs(bits);
        for (n, b) in best.iter_mut().enumerate() {
            *b = (*b).min(n as u64);
        }
        let level = self.level(stage);
        for l in 0..=level {
            let cap = Self::dictionary_cap(l);
            for (b, lz) in best.iter_mut().zip(lz_prefix_costs(bits, cap)) {
                *b = (*b).min(lz);
            }
            // a cap above the phrase count cannot bind; higher levels repeat
            if cap > bits.len() {
                break;
            }
        }
        Ok(best
            .into_iter()
            .enumerate()
            .map(|(n, body)| 2 + gamma_len(n as u64 + 1) + body)
            .collect())
    }

    fn epoch(&self, stage: u64) -> u64 {
        u64::from(self.level(stage))
    }
}
