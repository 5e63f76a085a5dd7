//! Lazy bit streams and the coding algebra on them.
//!
//! Every stream is a finite [`StreamDesc`] compiled into a [`BitStream`].
//! Descriptions serialize to JSON with a `kind` tag; see the README for the
//! full schema.

mod index_set;
mod memo;
mod pairing;
mod stream;

pub use index_set::IndexSet;
pub use pairing::{pair_decode, pair_encode, try_pair_encode, PairingCodec};
pub use stream::{
    column_position, join_over_position, some_to_many_one_source, some_to_many_source, BitStream,
    Family, FamilyDesc, FillMode, SplicePiece, StreamDesc,
};

/// Default search horizon for operations that would otherwise be unbounded.
pub const DEFAULT_HORIZON: u64 = 1 << 14;
