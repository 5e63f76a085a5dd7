use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use super::memo::{PrngBits, RankMemo};
use super::pairing::{pair_decode, pair_encode, try_pair_encode};
use crate::error::{Error, Result};
use crate::randomness::segments::{SegmentSchedule, WttSchedule};
use crate::reductions::{TTReduction, UseBound};
use crate::util::{bit01, bits_from_str, bits_to_string, unpack_bits};

/// Which segments of a double-segment construction carry the filler.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FillMode {
    /// Filler where the selector bit is 0; zeros where it is 1.
    ZeroFill,
    /// Filler where the selector bit is 1; zeros where it is 0.
    FillerFill,
}

/// Finite, serializable description of an infinite bit sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StreamDesc {
    Constant {
        #[serde(with = "bit01")]
        bit: bool,
    },
    Periodic {
        pattern: String,
    },
    Prng {
        seed: u64,
    },
    File {
        path: PathBuf,
        /// Number of valid bits; defaults to eight per byte.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bits: Option<u64>,
    },
    Explicit {
        prefix: String,
        #[serde(with = "bit01")]
        tail: bool,
    },
    Complement {
        of: Box<StreamDesc>,
    },
    Join {
        a: Box<StreamDesc>,
        b: Box<StreamDesc>,
    },
    /// Position `k·m + j` carries bit `m` of part `j`.
    Interleave {
        parts: Vec<StreamDesc>,
    },
    JoinOver {
        a: Box<StreamDesc>,
        b: Box<StreamDesc>,
        x: Box<StreamDesc>,
    },
    Column {
        of: Box<StreamDesc>,
        index: u64,
    },
    InfiniteJoin {
        family: FamilyDesc,
    },
    Segment {
        filler: Box<StreamDesc>,
        indicator: Box<StreamDesc>,
    },
    DoubleSegment {
        filler: Box<StreamDesc>,
        x0: Box<StreamDesc>,
        mode: FillMode,
    },
    WttSegment {
        filler: Box<StreamDesc>,
        s0: Box<StreamDesc>,
        bound: UseBound,
    },
    SomeToMany {
        of: Box<StreamDesc>,
    },
    SomeToManyOne {
        of: Box<StreamDesc>,
    },
    Apply {
        reduction: Box<TTReduction>,
        oracle: Box<StreamDesc>,
    },
    /// Piecewise stream: position `n` reads the last piece whose `from` is at
    /// most `n`. Pieces must start at 0 and be strictly increasing.
    Splice {
        pieces: Vec<SplicePiece>,
    },
    /// `base` with the listed positions forced to 1 (`set`) or 0 (`clear`).
    Overlay {
        base: Box<StreamDesc>,
        #[serde(default)]
        set: Vec<u64>,
        #[serde(default)]
        clear: Vec<u64>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplicePiece {
    pub from: u64,
    pub stream: StreamDesc,
}

/// Finite description of a map `i ↦ stream`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyDesc {
    /// Member `i` is `members[i mod len]`.
    Cycle { members: Vec<StreamDesc> },
    /// Member `i` is `members[i]`, then `rest` for every later index.
    Padded {
        members: Vec<StreamDesc>,
        rest: Box<StreamDesc>,
    },
    /// Member `i` is the pseudorandom stream with seed `base_seed + i`.
    Prng { base_seed: u64 },
}

enum Kind {
    Constant(bool),
    Periodic(Vec<bool>),
    Prng(PrngBits),
    File { bits: Vec<bool> },
    Explicit { prefix: Vec<bool>, tail: bool },
    Complement(BitStream),
    Join(BitStream, BitStream),
    Interleave(Vec<BitStream>),
    JoinOver {
        a: BitStream,
        b: BitStream,
        x: BitStream,
        ranks: RankMemo,
    },
    Column(BitStream, u64),
    InfiniteJoin(Family),
    Segment { filler: BitStream, indicator: BitStream },
    DoubleSegment {
        filler: BitStream,
        selector: BitStream,
        mode: FillMode,
    },
    WttSegment {
        filler: BitStream,
        selector: BitStream,
        schedule: WttSchedule,
    },
    SomeToMany(BitStream),
    SomeToManyOne(BitStream),
    Apply {
        reduction: Arc<TTReduction>,
        oracle: BitStream,
    },
    Overlay {
        base: BitStream,
        set: Vec<u64>,
        clear: Vec<u64>,
    },
    Splice(Vec<(u64, BitStream)>),
}

struct Node {
    desc: StreamDesc,
    kind: Kind,
}

/// A total, deterministic map from naturals to bits, built from a finite
/// [`StreamDesc`]. Cloning is cheap; clones share caches.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "StreamDesc", into = "StreamDesc")]
pub struct BitStream {
    inner: Arc<Node>,
}

impl fmt::Debug for BitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("BitStream").field(&self.inner.desc).finish()
    }
}

impl PartialEq for BitStream {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.desc == other.inner.desc
    }
}

impl TryFrom<StreamDesc> for BitStream {
    type Error = Error;

    fn try_from(desc: StreamDesc) -> Result<Self> {
        BitStream::from_desc(&desc)
    }
}

impl From<BitStream> for StreamDesc {
    fn from(s: BitStream) -> Self {
        s.inner.desc.clone()
    }
}

fn sorted_unique(mut v: Vec<u64>) -> Vec<u64> {
    v.sort_unstable();
    v.dedup();
    v
}

impl BitStream {
    fn wrap(desc: StreamDesc, kind: Kind) -> Self {
        BitStream {
            inner: Arc::new(Node { desc, kind }),
        }
    }

    /// Compiles a description. File-backed streams are read here.
    pub fn from_desc(desc: &StreamDesc) -> Result<Self> {
        let sub = |d: &StreamDesc| BitStream::from_desc(d);
        let kind = match desc {
            StreamDesc::Constant { bit } => Kind::Constant(*bit),
            StreamDesc::Periodic { pattern } => {
                let bits = bits_from_str(pattern)?;
                if bits.is_empty() {
                    return Err(Error::InvalidInput("periodic pattern is empty".into()));
                }
                Kind::Periodic(bits)
            }
            StreamDesc::Prng { seed } => Kind::Prng(PrngBits::new(*seed)),
            StreamDesc::File { path, bits } => {
                let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
                let available = bytes.len() as u64 * 8;
                let len = match bits {
                    Some(b) if *b > available => {
                        return Err(Error::InvalidInput(format!(
                            "{} holds {available} bits, description claims {b}",
                            path.display()
                        )))
                    }
                    Some(b) => *b,
                    None => available,
                };
                Kind::File {
                    bits: unpack_bits(&bytes, len as usize),
                }
            }
            StreamDesc::Explicit { prefix, tail } => Kind::Explicit {
                prefix: bits_from_str(prefix)?,
                tail: *tail,
            },
            StreamDesc::Complement { of } => Kind::Complement(sub(of)?),
            StreamDesc::Join { a, b } => Kind::Join(sub(a)?, sub(b)?),
            StreamDesc::Interleave { parts } => {
                if parts.is_empty() {
                    return Err(Error::InvalidInput("interleave needs at least one part".into()));
                }
                Kind::Interleave(parts.iter().map(sub).collect::<Result<_>>()?)
            }
            StreamDesc::JoinOver { a, b, x } => Kind::JoinOver {
                a: sub(a)?,
                b: sub(b)?,
                x: sub(x)?,
                ranks: RankMemo::default(),
            },
            StreamDesc::Column { of, index } => Kind::Column(sub(of)?, *index),
            StreamDesc::InfiniteJoin { family } => Kind::InfiniteJoin(Family::from_desc(family)?),
            StreamDesc::Segment { filler, indicator } => Kind::Segment {
                filler: sub(filler)?,
                indicator: sub(indicator)?,
            },
            StreamDesc::DoubleSegment { filler, x0, mode } => {
                let x0 = sub(x0)?;
                Kind::DoubleSegment {
                    filler: sub(filler)?,
                    selector: BitStream::join(&x0, &x0),
                    mode: *mode,
                }
            }
            StreamDesc::WttSegment { filler, s0, bound } => {
                let s0 = sub(s0)?;
                Kind::WttSegment {
                    filler: sub(filler)?,
                    selector: BitStream::interleave(&[s0.clone(), s0.clone(), s0]),
                    schedule: WttSchedule::new(bound),
                }
            }
            StreamDesc::SomeToMany { of } => Kind::SomeToMany(sub(of)?),
            StreamDesc::SomeToManyOne { of } => Kind::SomeToManyOne(sub(of)?),
            StreamDesc::Apply { reduction, oracle } => Kind::Apply {
                reduction: Arc::new((**reduction).clone()),
                oracle: sub(oracle)?,
            },
            StreamDesc::Splice { pieces } => {
                let compiled = pieces
                    .iter()
                    .map(|p| Ok((p.from, sub(&p.stream)?)))
                    .collect::<Result<Vec<_>>>()?;
                check_splice(&compiled)?;
                Kind::Splice(compiled)
            }
            StreamDesc::Overlay { base, set, clear } => {
                let set = sorted_unique(set.clone());
                let clear = sorted_unique(clear.clone());
                if let Some(p) = set.iter().find(|p| clear.binary_search(p).is_ok()) {
                    return Err(Error::InvalidInput(format!(
                        "overlay both sets and clears position {p}"
                    )));
                }
                Kind::Overlay {
                    base: sub(base)?,
                    set,
                    clear,
                }
            }
        };
        Ok(BitStream::wrap(desc.clone(), kind))
    }

    pub fn desc(&self) -> &StreamDesc {
        &self.inner.desc
    }

    pub fn constant(bit: bool) -> Self {
        BitStream::wrap(StreamDesc::Constant { bit }, Kind::Constant(bit))
    }

    pub fn zeros() -> Self {
        Self::constant(false)
    }

    pub fn ones() -> Self {
        Self::constant(true)
    }

    /// Repeats `pattern` (a non-empty string of `0`/`1`) forever.
    pub fn periodic(pattern: &str) -> Result<Self> {
        Self::from_desc(&StreamDesc::Periodic {
            pattern: pattern.to_string(),
        })
    }

    pub fn prng(seed: u64) -> Self {
        BitStream::wrap(StreamDesc::Prng { seed }, Kind::Prng(PrngBits::new(seed)))
    }

    pub fn explicit(prefix: &[bool], tail: bool) -> Self {
        BitStream::wrap(
            StreamDesc::Explicit {
                prefix: bits_to_string(prefix),
                tail,
            },
            Kind::Explicit {
                prefix: prefix.to_vec(),
                tail,
            },
        )
    }

    /// Raw bytes, most significant bit first.
    pub fn file(path: impl Into<PathBuf>, bits: Option<u64>) -> Result<Self> {
        Self::from_desc(&StreamDesc::File {
            path: path.into(),
            bits,
        })
    }

    pub fn complement(&self) -> Self {
        BitStream::wrap(
            StreamDesc::Complement {
                of: Box::new(self.desc().clone()),
            },
            Kind::Complement(self.clone()),
        )
    }

    /// `A ⊕ B`: even positions carry `a`, odd positions carry `b`.
    pub fn join(a: &BitStream, b: &BitStream) -> Self {
        BitStream::wrap(
            StreamDesc::Join {
                a: Box::new(a.desc().clone()),
                b: Box::new(b.desc().clone()),
            },
            Kind::Join(a.clone(), b.clone()),
        )
    }

    /// k-way join; panics on an empty slice.
    pub fn interleave(parts: &[BitStream]) -> Self {
        assert!(!parts.is_empty(), "interleave needs at least one part");
        BitStream::wrap(
            StreamDesc::Interleave {
                parts: parts.iter().map(|p| p.desc().clone()).collect(),
            },
            Kind::Interleave(parts.to_vec()),
        )
    }

    /// `A ⊕_X B`: the n-th 1 of `x` carries `a(n)`, the n-th 0 carries `b(n)`.
    pub fn join_over(a: &BitStream, b: &BitStream, x: &BitStream) -> Self {
        BitStream::wrap(
            StreamDesc::JoinOver {
                a: Box::new(a.desc().clone()),
                b: Box::new(b.desc().clone()),
                x: Box::new(x.desc().clone()),
            },
            Kind::JoinOver {
                a: a.clone(),
                b: b.clone(),
                x: x.clone(),
                ranks: RankMemo::default(),
            },
        )
    }

    /// Column `i`: `n ↦ self(⟨i, n⟩)`.
    pub fn column(&self, i: u64) -> Self {
        BitStream::wrap(
            StreamDesc::Column {
                of: Box::new(self.desc().clone()),
                index: i,
            },
            Kind::Column(self.clone(), i),
        )
    }

    /// `⟨i, n⟩ ↦ family(i)(n)`.
    pub fn infinite_join(family: &Family) -> Self {
        BitStream::wrap(
            StreamDesc::InfiniteJoin {
                family: family.desc.clone(),
            },
            Kind::InfiniteJoin(family.clone()),
        )
    }

    pub(crate) fn segment(filler: &BitStream, indicator: &BitStream) -> Self {
        BitStream::wrap(
            StreamDesc::Segment {
                filler: Box::new(filler.desc().clone()),
                indicator: Box::new(indicator.desc().clone()),
            },
            Kind::Segment {
                filler: filler.clone(),
                indicator: indicator.clone(),
            },
        )
    }

    pub(crate) fn double_segment(filler: &BitStream, x0: &BitStream, mode: FillMode) -> Self {
        BitStream::wrap(
            StreamDesc::DoubleSegment {
                filler: Box::new(filler.desc().clone()),
                x0: Box::new(x0.desc().clone()),
                mode,
            },
            Kind::DoubleSegment {
                filler: filler.clone(),
                selector: BitStream::join(x0, x0),
                mode,
            },
        )
    }

    pub(crate) fn wtt_segment(filler: &BitStream, s0: &BitStream, bound: &UseBound) -> Self {
        BitStream::wrap(
            StreamDesc::WttSegment {
                filler: Box::new(filler.desc().clone()),
                s0: Box::new(s0.desc().clone()),
                bound: bound.clone(),
            },
            Kind::WttSegment {
                filler: filler.clone(),
                selector: BitStream::interleave(&[s0.clone(), s0.clone(), s0.clone()]),
                schedule: WttSchedule::new(bound),
            },
        )
    }

    pub(crate) fn some_to_many(b: &BitStream) -> Self {
        BitStream::wrap(
            StreamDesc::SomeToMany {
                of: Box::new(b.desc().clone()),
            },
            Kind::SomeToMany(b.clone()),
        )
    }

    pub(crate) fn some_to_many_one(b: &BitStream) -> Self {
        BitStream::wrap(
            StreamDesc::SomeToManyOne {
                of: Box::new(b.desc().clone()),
            },
            Kind::SomeToManyOne(b.clone()),
        )
    }

    pub(crate) fn apply(reduction: &TTReduction, oracle: &BitStream) -> Self {
        BitStream::wrap(
            StreamDesc::Apply {
                reduction: Box::new(reduction.clone()),
                oracle: Box::new(oracle.desc().clone()),
            },
            Kind::Apply {
                reduction: Arc::new(reduction.clone()),
                oracle: oracle.clone(),
            },
        )
    }

    /// `self` with the given positions forced to 1 and 0 respectively.
    pub fn overlay(&self, set: Vec<u64>, clear: Vec<u64>) -> Result<Self> {
        let set = sorted_unique(set);
        let clear = sorted_unique(clear);
        if let Some(p) = set.iter().find(|p| clear.binary_search(p).is_ok()) {
            return Err(Error::InvalidInput(format!(
                "overlay both sets and clears position {p}"
            )));
        }
        Ok(BitStream::wrap(
            StreamDesc::Overlay {
                base: Box::new(self.desc().clone()),
                set: set.clone(),
                clear: clear.clone(),
            },
            Kind::Overlay {
                base: self.clone(),
                set,
                clear,
            },
        ))
    }

    /// Stream reading `pieces[i].1` on `[pieces[i].0, pieces[i+1].0)`.
    pub fn splice(pieces: Vec<(u64, BitStream)>) -> Result<Self> {
        check_splice(&pieces)?;
        let desc = StreamDesc::Splice {
            pieces: pieces
                .iter()
                .map(|(from, s)| SplicePiece {
                    from: *from,
                    stream: s.desc().clone(),
                })
                .collect(),
        };
        Ok(BitStream::wrap(desc, Kind::Splice(pieces)))
    }

    /// Bit at position `n`.
    pub fn bit(&self, n: u64) -> Result<bool> {
        match &self.inner.kind {
            Kind::Constant(b) => Ok(*b),
            Kind::Periodic(p) => Ok(p[(n % p.len() as u64) as usize]),
            Kind::Prng(bits) => Ok(bits.bit(n)),
            Kind::File { bits } => bits.get(n as usize).copied().ok_or(Error::HorizonExceeded {
                position: n,
                horizon: bits.len() as u64,
            }),
            Kind::Explicit { prefix, tail } => Ok(prefix.get(n as usize).copied().unwrap_or(*tail)),
            Kind::Complement(a) => Ok(!a.bit(n)?),
            Kind::Join(a, b) => {
                if n % 2 == 0 {
                    a.bit(n / 2)
                } else {
                    b.bit(n / 2)
                }
            }
            Kind::Interleave(parts) => {
                let k = parts.len() as u64;
                parts[(n % k) as usize].bit(n / k)
            }
            Kind::JoinOver { a, b, x, ranks } => {
                let ones = ranks.ones_before(n, |m| x.bit(m))?;
                if x.bit(n)? {
                    a.bit(ones)
                } else {
                    b.bit(n - ones)
                }
            }
            Kind::Column(a, i) => a.bit(checked_pair(*i, n)?),
            Kind::InfiniteJoin(family) => {
                let (i, m) = pair_decode(n);
                family.member(i)?.bit(m)
            }
            Kind::Segment { filler, indicator } => match SegmentSchedule::k_of(n) {
                Some(k) if n >= SegmentSchedule::start(1) && indicator.bit(k as u64)? => filler.bit(n - SegmentSchedule::start(k)),
                _ => Ok(false),
            },
            Kind::DoubleSegment {
                filler,
                selector,
                mode,
            } => match SegmentSchedule::k_odd_of(n) {
                Some(k) => {
                    let x = selector.bit(k as u64)?;
                    let on = match mode {
                        FillMode::ZeroFill => !x,
                        FillMode::FillerFill => x,
                    };
                    if on {
                        filler.bit(n - SegmentSchedule::start(k))
                    } else {
                        Ok(false)
                    }
                }
                None => Ok(false),
            },
            Kind::WttSegment {
                filler,
                selector,
                schedule,
            } => match schedule.k_mod3_of(n) {
                Some(k) if selector.bit(k as u64)? => filler.bit(n - schedule.ell(k)),
                _ => Ok(false),
            },
            Kind::SomeToMany(b) => b.bit(some_to_many_source(n)?),
            Kind::SomeToManyOne(b) => b.bit(some_to_many_one_source(n)?),
            Kind::Apply { reduction, oracle } => reduction.output_bit(n, oracle),
            Kind::Splice(pieces) => {
                let i = pieces.partition_point(|(from, _)| *from <= n) - 1;
                pieces[i].1.bit(n)
            }
            Kind::Overlay { base, set, clear } => {
                if set.binary_search(&n).is_ok() {
                    Ok(true)
                } else if clear.binary_search(&n).is_ok() {
                    Ok(false)
                } else {
                    base.bit(n)
                }
            }
        }
    }

    /// The first `n` bits.
    pub fn prefix(&self, n: u64) -> Result<Vec<bool>> {
        (0..n).map(|i| self.bit(i)).collect()
    }

    /// Position of the `n`-th one (counting from 0), searching `0..horizon`.
    pub fn principal(&self, n: u64, horizon: u64) -> Result<u64> {
        let mut seen = 0;
        for p in 0..horizon {
            if self.bit(p)? {
                if seen == n {
                    return Ok(p);
                }
                seen += 1;
            }
        }
        Err(Error::NotFound { index: n, horizon })
    }
}

fn check_splice(pieces: &[(u64, BitStream)]) -> Result<()> {
    if pieces.first().map(|p| p.0) != Some(0) {
        return Err(Error::InvalidInput("splice must start with a piece at 0".into()));
    }
    if pieces.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(Error::InvalidInput("splice pieces must be strictly increasing".into()));
    }
    Ok(())
}

fn checked_pair(x: u64, y: u64) -> Result<u64> {
    try_pair_encode(x, y).ok_or_else(|| Error::InvalidInput(format!("pair ({x}, {y}) overflows")))
}

/// Source position read by the many-columns recoding at output position `z`:
/// `⟨⟨i, j⟩, n⟩ ↦ ⟨i, n⟩`.
pub fn some_to_many_source(z: u64) -> Result<u64> {
    let (p, n) = pair_decode(z);
    let (i, _j) = pair_decode(p);
    checked_pair(i, n)
}

/// Source position read by the injective recoding at output position `z`:
/// `⟨⟨i, j⟩, n⟩ ↦ ⟨i, ⟨j, n⟩⟩`, so column `⟨i, j⟩` of the output is column
/// `j` of column `i` of the input.
pub fn some_to_many_one_source(z: u64) -> Result<u64> {
    let (p, n) = pair_decode(z);
    let (i, j) = pair_decode(p);
    checked_pair(i, checked_pair(j, n)?)
}

/// Position where `a(n)` (side `true`) or `b(n)` (side `false`) lands in
/// `a ⊕_x b`, i.e. the principal function of `x` or of its complement.
pub fn join_over_position(x: &BitStream, side: bool, n: u64, horizon: u64) -> Result<u64> {
    let target = if side { x.clone() } else { x.complement() };
    target.principal(n, horizon).map_err(|_| Error::PositionExhausted {
        side: if side { "one" } else { "zero" },
        index: n,
        horizon,
    })
}

/// A runtime family of streams `i ↦ F(i)`.
#[derive(Clone)]
pub struct Family {
    desc: FamilyDesc,
    members: Arc<Vec<BitStream>>,
    rest: Option<BitStream>,
    generated: Arc<RwLock<HashMap<u64, BitStream>>>,
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Family").field(&self.desc).finish()
    }
}

impl Family {
    pub fn from_desc(desc: &FamilyDesc) -> Result<Self> {
        let compile = |ms: &[StreamDesc]| ms.iter().map(BitStream::from_desc).collect::<Result<Vec<_>>>();
        let (members, rest) = match desc {
            FamilyDesc::Cycle { members } => {
                if members.is_empty() {
                    return Err(Error::InvalidInput("cycle family needs a member".into()));
                }
                (compile(members)?, None)
            }
            FamilyDesc::Padded { members, rest } => (compile(members)?, Some(BitStream::from_desc(rest)?)),
            FamilyDesc::Prng { .. } => (Vec::new(), None),
        };
        Ok(Family {
            desc: desc.clone(),
            members: Arc::new(members),
            rest,
            generated: Arc::default(),
        })
    }

    /// Family cycling through `members`.
    pub fn cycle(members: Vec<BitStream>) -> Result<Self> {
        Self::from_desc(&FamilyDesc::Cycle {
            members: members.iter().map(|m| m.desc().clone()).collect(),
        })
    }

    pub fn desc(&self) -> &FamilyDesc {
        &self.desc
    }

    pub fn member(&self, i: u64) -> Result<BitStream> {
        match &self.desc {
            FamilyDesc::Cycle { .. } => Ok(self.members[(i % self.members.len() as u64) as usize].clone()),
            FamilyDesc::Padded { .. } => Ok(self
                .members
                .get(i as usize)
                .cloned()
                .unwrap_or_else(|| self.rest.clone().expect("padded family has a rest stream"))),
            FamilyDesc::Prng { base_seed } => {
                if let Some(s) = self.generated.read().expect("family cache poisoned").get(&i) {
                    return Ok(s.clone());
                }
                let s = BitStream::prng(base_seed.wrapping_add(i));
                self.generated
                    .write()
                    .expect("family cache poisoned")
                    .insert(i, s.clone());
                Ok(s)
            }
        }
    }
}

/// Convenience: `⟨i, n⟩` as used by column arithmetic.
pub fn column_position(i: u64, n: u64) -> u64 {
    pair_encode(i, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_values() {
        assert!(BitStream::constant(true).bit(7).unwrap());
        assert!(!BitStream::periodic("01").unwrap().bit(4).unwrap());
        let j = BitStream::join(&BitStream::ones(), &BitStream::zeros());
        assert!(!j.bit(5).unwrap());
        assert_eq!(j.prefix(6).unwrap(), vec![true, false, true, false, true, false]);
    }

    #[test]
    fn join_over_selector_identity() {
        let x = BitStream::prng(3);
        let s = BitStream::join_over(&BitStream::ones(), &BitStream::zeros(), &x);
        assert_eq!(s.prefix(2000).unwrap(), x.prefix(2000).unwrap());
    }

    #[test]
    fn join_over_evens_is_join() {
        let a = BitStream::prng(1);
        let b = BitStream::prng(2);
        let evens = BitStream::periodic("10").unwrap();
        let lhs = BitStream::join_over(&a, &b, &evens);
        let rhs = BitStream::join(&a, &b);
        assert_eq!(lhs.prefix(3000).unwrap(), rhs.prefix(3000).unwrap());
    }

    #[test]
    fn join_over_position_exhausted() {
        let x = BitStream::explicit(&[true, false, true], false);
        assert_eq!(join_over_position(&x, true, 1, 100).unwrap(), 2);
        assert!(matches!(
            join_over_position(&x, true, 2, 100),
            Err(Error::PositionExhausted { .. })
        ));
        assert_eq!(join_over_position(&x, false, 3, 100).unwrap(), 5);
    }

    #[test]
    fn principal_function() {
        let odd = BitStream::periodic("01").unwrap();
        assert_eq!(odd.principal(0, 100).unwrap(), 1);
        assert_eq!(odd.principal(3, 100).unwrap(), 7);
        assert!(matches!(
            BitStream::zeros().principal(0, 1000),
            Err(Error::NotFound { .. })
        ));
    }

    #[test]
    fn column_spot_check() {
        let a = BitStream::prng(11);
        let c = a.column(2);
        assert_eq!(c.bit(5).unwrap(), a.bit(pair_encode(2, 5)).unwrap());
        assert_eq!(pair_encode(2, 5), 33);
    }

    #[test]
    fn infinite_join_of_parities() {
        let fam = Family::cycle(vec![BitStream::zeros(), BitStream::ones()]).unwrap();
        let j = BitStream::infinite_join(&fam);
        assert_eq!(j.column(3).prefix(50).unwrap(), vec![true; 50]);
        assert_eq!(j.column(4).prefix(50).unwrap(), vec![false; 50]);
    }

    #[test]
    fn overlay_rejects_conflicts() {
        assert!(BitStream::zeros().overlay(vec![3], vec![3]).is_err());
        let o = BitStream::zeros().overlay(vec![3, 1], vec![]).unwrap();
        assert_eq!(o.prefix(5).unwrap(), vec![false, true, false, true, false]);
    }

    #[test]
    fn json_roundtrip_keeps_behaviour() {
        let s = BitStream::join_over(
            &BitStream::prng(5).complement(),
            &BitStream::periodic("011").unwrap(),
            &BitStream::prng(6),
        );
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains("\"kind\":\"join_over\""));
        let back: BitStream = serde_json::from_str(&text).unwrap();
        assert_eq!(back.prefix(500).unwrap(), s.prefix(500).unwrap());
    }

    #[test]
    fn constant_bits_serialize_as_integers() {
        let text = serde_json::to_string(&BitStream::ones()).unwrap();
        assert_eq!(text, r#"{"kind":"constant","bit":1}"#);
        let s: BitStream = serde_json::from_str(r#"{"kind":"explicit","prefix":"10","tail":true}"#).unwrap();
        assert_eq!(s.prefix(4).unwrap(), vec![true, false, true, true]);
    }

    #[test]
    fn file_stream_reports_horizon() {
        let dir = std::env::temp_dir().join(format!("ttlab-stream-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bits.bin");
        std::fs::write(&path, [0b1010_0000u8]).unwrap();
        let s = BitStream::file(&path, Some(3)).unwrap();
        assert_eq!(s.prefix(3).unwrap(), vec![true, false, true]);
        assert!(matches!(s.bit(3), Err(Error::HorizonExceeded { position: 3, horizon: 3 })));
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn streams_are_shareable_across_threads() {
        let s = BitStream::join_over(&BitStream::prng(1), &BitStream::prng(2), &BitStream::prng(3));
        let expected = s.prefix(4096).unwrap();
        std::thread::scope(|scope| {
            for _ in 0..4 {
                let s = s.clone();
                let expected = &expected;
                scope.spawn(move || {
                    assert_eq!(&s.prefix(4096).unwrap(), expected);
                });
            }
        });
    }
}
