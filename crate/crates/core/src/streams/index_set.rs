use serde::{Deserialize, Serialize};

use super::BitStream;
use crate::error::{Error, Result};

/// A set of naturals given by a finite description, enumerated in
/// increasing order. Infiniteness is asserted by whoever builds the set;
/// only "at least k elements below a horizon" is ever checked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IndexSet {
    /// `{m, m+1, …}`
    Tail { from: u64 },
    /// `{mul·n + add : n ≥ 0}` with `mul ≥ 1`.
    Arithmetic { mul: u64, add: u64 },
    /// A finite, strictly increasing list.
    Explicit { elements: Vec<u64> },
    /// The positions where a stream is 1.
    Stream {
        stream: BitStream,
        asserted_infinite: bool,
    },
}

impl IndexSet {
    pub fn tail(from: u64) -> Self {
        IndexSet::Tail { from }
    }

    pub fn arithmetic(mul: u64, add: u64) -> Result<Self> {
        if mul == 0 {
            return Err(Error::InvalidInput("arithmetic index set needs a positive step".into()));
        }
        Ok(IndexSet::Arithmetic { mul, add })
    }

    /// Sorts and dedups `elements`.
    pub fn explicit(mut elements: Vec<u64>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        IndexSet::Explicit { elements }
    }

    pub fn from_stream(stream: BitStream, asserted_infinite: bool) -> Self {
        IndexSet::Stream {
            stream,
            asserted_infinite,
        }
    }

    /// Whether the constructor asserted an infinite set.
    pub fn asserted_infinite(&self) -> bool {
        match self {
            IndexSet::Tail { .. } | IndexSet::Arithmetic { .. } => true,
            IndexSet::Explicit { .. } => false,
            IndexSet::Stream {
                asserted_infinite, ..
            } => *asserted_infinite,
        }
    }

    pub fn contains(&self, n: u64) -> Result<bool> {
        Ok(match self {
            IndexSet::Tail { from } => n >= *from,
            IndexSet::Arithmetic { mul, add } => n >= *add && (n - add) % mul == 0,
            IndexSet::Explicit { elements } => elements.binary_search(&n).is_ok(),
            IndexSet::Stream { stream, .. } => stream.bit(n)?,
        })
    }

    /// Members in `lo..hi`, increasing.
    pub fn elements_in(&self, lo: u64, hi: u64) -> Result<Vec<u64>> {
        if lo >= hi {
            return Ok(Vec::new());
        }
        match self {
            IndexSet::Tail { from } => Ok((lo.max(*from)..hi).collect()),
            IndexSet::Arithmetic { mul, add } => {
                let first = if lo <= *add {
                    *add
                } else {
                    add + (lo - add).div_ceil(*mul) * mul
                };
                Ok((first..hi).step_by(*mul as usize).collect())
            }
            IndexSet::Explicit { elements } => {
                let mut v: Vec<u64> = elements.iter().copied().filter(|&e| e >= lo && e < hi).collect();
                v.sort_unstable();
                v.dedup();
                Ok(v)
            }
            IndexSet::Stream { stream, .. } => {
                let mut v = Vec::new();
                for n in lo..hi {
                    if stream.bit(n)? {
                        v.push(n);
                    }
                }
                Ok(v)
            }
        }
    }

    /// Members below `horizon`, increasing.
    pub fn elements_below(&self, horizon: u64) -> Result<Vec<u64>> {
        self.elements_in(0, horizon)
    }

    pub fn has_at_least(&self, k: usize, horizon: u64) -> Result<bool> {
        Ok(self.elements_below(horizon)?.len() >= k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn tail_is_everything_from_m() {
        assert_eq!(IndexSet::tail(3).elements_below(7).unwrap(), vec![3, 4, 5, 6]);
        assert!(IndexSet::tail(3).asserted_infinite());
    }

    #[test]
    fn arithmetic_windows() {
        let s = IndexSet::arithmetic(3, 2).unwrap();
        assert_eq!(s.elements_in(0, 12).unwrap(), vec![2, 5, 8, 11]);
        assert_eq!(s.elements_in(6, 12).unwrap(), vec![8, 11]);
        assert!(IndexSet::arithmetic(0, 1).is_err());
    }

    #[test]
    fn explicit_is_finite() {
        let s = IndexSet::explicit(vec![9, 1, 4, 4]);
        assert!(!s.asserted_infinite());
        assert_eq!(s.elements_below(100).unwrap(), vec![1, 4, 9]);
        assert!(s.has_at_least(3, 10).unwrap());
        assert!(!s.has_at_least(3, 9).unwrap());
    }

    #[test]
    fn stream_backed() {
        let s = IndexSet::from_stream(BitStream::periodic("001").unwrap(), true);
        assert_eq!(s.elements_below(10).unwrap(), vec![2, 5, 8]);
        assert!(s.contains(11).unwrap());
    }

    proptest! {
        #[test]
        fn enumeration_strictly_increasing_and_matches_contains(
            mul in 1u64..9, add in 0u64..20, lo in 0u64..50, len in 0u64..200
        ) {
            let s = IndexSet::arithmetic(mul, add).unwrap();
            let got = s.elements_in(lo, lo + len).unwrap();
            prop_assert!(got.windows(2).all(|w| w[0] < w[1]));
            let brute: Vec<u64> = (lo..lo + len).filter(|&n| s.contains(n).unwrap()).collect();
            prop_assert_eq!(got, brute);
        }
    }
}
