//! Internally synchronized caches behind stream evaluation.
//!
//! Both caches are transparent: they only ever store values that the
//! uncached path would have produced.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;

const CHUNK_WORDS: usize = 64;
const CHUNK_BITS: u64 = (CHUNK_WORDS * 64) as u64;

/// Random-access pseudorandom bits: chunk `c` is the ChaCha8 keystream for
/// `seed` starting at word position `c * CHUNK_WORDS * 2`.
#[derive(Debug)]
pub(crate) struct PrngBits {
    seed: u64,
    chunks: RwLock<HashMap<u64, Arc<[u64; CHUNK_WORDS]>>>,
}

impl PrngBits {
    pub(crate) fn new(seed: u64) -> Self {
        PrngBits {
            seed,
            chunks: RwLock::new(HashMap::new()),
        }
    }

    fn chunk(&self, index: u64) -> Arc<[u64; CHUNK_WORDS]> {
        if let Some(c) = self.chunks.read().expect("prng cache poisoned").get(&index) {
            return Arc::clone(c);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        // word positions count 32-bit words
        rng.set_word_pos(index as u128 * CHUNK_WORDS as u128 * 2);
        let mut words = [0u64; CHUNK_WORDS];
        for w in words.iter_mut() {
            *w = rng.next_u64();
        }
        let words = Arc::new(words);
        self.chunks
            .write()
            .expect("prng cache poisoned")
            .entry(index)
            .or_insert_with(|| Arc::clone(&words));
        words
    }

    pub(crate) fn bit(&self, n: u64) -> bool {
        let chunk = self.chunk(n / CHUNK_BITS);
        let offset = n % CHUNK_BITS;
        chunk[(offset / 64) as usize] >> (63 - offset % 64) & 1 == 1
    }
}

#[derive(Debug, Default)]
struct RankState {
    words: Vec<u64>,
    // ones strictly before word i
    ranks: Vec<u64>,
}

/// Memoized prefix of a stream with constant-time rank queries.
#[derive(Debug, Default)]
pub(crate) struct RankMemo {
    state: RwLock<RankState>,
}

impl RankMemo {
    /// Number of ones among positions `0..m` of the stream evaluated by `bit`.
    pub(crate) fn ones_before(
        &self,
        m: u64,
        bit: impl Fn(u64) -> Result<bool>,
    ) -> Result<u64> {
        let word = (m / 64) as usize;
        {
            let st = self.state.read().expect("rank cache poisoned");
            if word < st.words.len() {
                return Ok(Self::rank_in(&st, m));
            }
        }
        let mut st = self.state.write().expect("rank cache poisoned");
        while st.words.len() <= word {
            let w = st.words.len() as u64;
            let mut value = 0u64;
            for i in 0..64 {
                if bit(w * 64 + i)? {
                    value |= 1 << i;
                }
            }
            let before = st.ranks.last().copied().unwrap_or(0)
                + st.words.last().map_or(0, |x| x.count_ones() as u64);
            st.words.push(value);
            st.ranks.push(before);
        }
        Ok(Self::rank_in(&st, m))
    }

    fn rank_in(st: &RankState, m: u64) -> u64 {
        let word = (m / 64) as usize;
        let mask = (1u64 << (m % 64)) - 1;
        st.ranks[word] + (st.words[word] & mask).count_ones() as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prng_is_deterministic_and_seed_sensitive() {
        let a = PrngBits::new(7);
        let b = PrngBits::new(7);
        let c = PrngBits::new(8);
        let pa: Vec<bool> = (0..10_000).map(|n| a.bit(n)).collect();
        // read b backwards so chunks are filled out of order
        let mut pb: Vec<bool> = (0..10_000).rev().map(|n| b.bit(n)).collect();
        pb.reverse();
        assert_eq!(pa, pb);
        let pc: Vec<bool> = (0..10_000).map(|n| c.bit(n)).collect();
        assert_ne!(pa, pc);
        let ones = pa.iter().filter(|&&x| x).count();
        assert!((4700..5300).contains(&ones), "{ones}");
    }

    #[test]
    fn rank_matches_naive_count() {
        let memo = RankMemo::default();
        let f = |n: u64| Ok(n % 3 == 0 || n % 7 == 2);
        for m in [0u64, 1, 5, 63, 64, 65, 200, 129, 3] {
            let naive = (0..m).filter(|&n| f(n).unwrap()).count() as u64;
            assert_eq!(memo.ones_before(m, f).unwrap(), naive, "m={m}");
        }
    }
}
