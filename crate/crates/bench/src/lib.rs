//! Shared fixtures for the criterion benchmarks.

use ttlab::{BitStream, TTReduction};

/// A stream mixing every join flavour, so evaluation exercises the caches.
pub fn mixed_stream(seed: u64) -> BitStream {
    let a = BitStream::prng(seed);
    let b = BitStream::prng(seed.wrapping_add(1)).complement();
    let x = BitStream::prng(seed.wrapping_add(2));
    BitStream::join(&BitStream::join_over(&a, &b, &x), &a)
}

/// A positive reduction reading two adjacent bits per row.
pub fn pair_reduction() -> TTReduction {
    TTReduction::from_template("v[2n] | v[2n+1] & v[n]", ttlab::ReductionClass::Positive)
        .expect("static template parses")
}
