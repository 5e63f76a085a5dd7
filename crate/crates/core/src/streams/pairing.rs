//! Cantor pairing of naturals.
//!
//! `⟨x, y⟩ = (x + y)(x + y + 1)/2 + y`. The codec is a bijection `ℕ² → ℕ`,
//! which is what lets a single real carry infinitely many columns.

/// Encodes a pair. Panics if the code does not fit in a `u64`.
pub fn pair_encode(x: u64, y: u64) -> u64 {
    try_pair_encode(x, y).unwrap_or_else(|| panic!("pairing overflow for ({x}, {y})"))
}

/// Encodes a pair, returning `None` when the code overflows a `u64`.
pub fn try_pair_encode(x: u64, y: u64) -> Option<u64> {
    let s = (x as u128) + (y as u128);
    let z = s.checked_mul(s + 1)? / 2 + y as u128;
    u64::try_from(z).ok()
}

/// Inverse of [`pair_encode`].
pub fn pair_decode(z: u64) -> (u64, u64) {
    let z = z as u128;
    // w is the diagonal index: the largest w with w(w+1)/2 <= z.
    let mut w = ((8 * z + 1).isqrt() - 1) / 2;
    while w * (w + 1) / 2 > z {
        w -= 1;
    }
    while (w + 1) * (w + 2) / 2 <= z {
        w += 1;
    }
    let y = z - w * (w + 1) / 2;
    let x = w - y;
    (x as u64, y as u64)
}

/// Zero-sized handle for the pairing bijection.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PairingCodec;

impl PairingCodec {
    pub fn encode(self, x: u64, y: u64) -> u64 {
        pair_encode(x, y)
    }

    pub fn decode(self, z: u64) -> (u64, u64) {
        pair_decode(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_values() {
        assert_eq!(pair_encode(0, 0), 0);
        assert_eq!(pair_encode(1, 0), 1);
        assert_eq!(pair_encode(0, 1), 2);
        assert_eq!(pair_encode(1, 1), 4);
        assert_eq!(pair_decode(4), (1, 1));
    }

    #[test]
    fn table_matches_formula() {
        // row-major walk of the diagonals
        let mut z = 0;
        for w in 0..50u64 {
            for y in 0..=w {
                assert_eq!(pair_encode(w - y, y), z);
                z += 1;
            }
        }
    }

    #[test]
    fn overflow_is_detected() {
        assert!(try_pair_encode(u64::MAX, 1).is_none());
        assert!(try_pair_encode(1 << 31, 1 << 31).is_some());
    }

    #[test]
    fn decode_near_u64_max() {
        for z in [u64::MAX, u64::MAX - 1, u64::MAX / 2] {
            let (x, y) = pair_decode(z);
            assert_eq!(try_pair_encode(x, y), Some(z));
        }
    }

    proptest! {
        #[test]
        fn roundtrip(x in 0u64..1 << 30, y in 0u64..1 << 30) {
            prop_assert_eq!(pair_decode(pair_encode(x, y)), (x, y));
            prop_assert!(pair_encode(x, y) >= x.max(y));
        }
    }
}
