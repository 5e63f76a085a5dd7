//! Deterministic generator for the adversary test corpus.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::formulas::{Affine, ReductionClass};
use crate::reductions::TTReduction;

/// Seed of the shipped corpus.
pub const CORPUS_SEED: u64 = 20_240_611;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    pub reduction: TTReduction,
}

fn leaf(a: Affine) -> String {
    a.to_string()
}

fn affine_leaves(rng: &mut ChaCha8Rng, count: usize, fixed_chance: f64) -> Vec<Affine> {
    let mul = rng.random_range(1..=3u64);
    let mut adds: Vec<u64> = (0..8).collect();
    adds.shuffle(rng);
    let mut out = Vec::with_capacity(count);
    for add in adds.into_iter().take(count) {
        if rng.random_bool(fixed_chance) {
            out.push(Affine { mul: 0, add: rng.random_range(0..12) });
        } else {
            out.push(Affine { mul, add });
        }
    }
    out.dedup();
    out
}

/// Random expression over `leaves` using each exactly once.
fn combine(rng: &mut ChaCha8Rng, mut leaves: Vec<String>, ops: &[&str], negate: bool) -> String {
    leaves.shuffle(rng);
    while leaves.len() > 1 {
        let i = rng.random_range(0..leaves.len() - 1);
        let right = leaves.remove(i + 1);
        let left = leaves.remove(i);
        let op = ops[rng.random_range(0..ops.len())];
        let mut joined = format!("({left} {op} {right})");
        if negate && rng.random_bool(0.25) {
            joined = format!("!{joined}");
        }
        leaves.insert(i, joined);
    }
    let mut only = leaves.pop().expect("at least one leaf");
    if negate && rng.random_bool(0.25) {
        only = format!("!{only}");
    }
    only
}

fn positive(rng: &mut ChaCha8Rng) -> String {
    let count = rng.random_range(1..=4);
    let mut leaves: Vec<String> = affine_leaves(rng, count, 0.1).into_iter().map(leaf).collect();
    if rng.random_bool(0.1) {
        leaves.push("1".into());
    }
    combine(rng, leaves, &["&", "|"], false)
}

fn linear(rng: &mut ChaCha8Rng) -> String {
    let count = rng.random_range(1..=3);
    let mul = rng.random_range(1..=3u64);
    let mut adds: Vec<u64> = (0..8).collect();
    adds.shuffle(rng);
    let mut leaves: Vec<String> = adds[..count].iter().map(|&add| leaf(Affine { mul, add })).collect();
    if rng.random_bool(0.3) {
        leaves.push("1".into());
    }
    combine(rng, leaves, &["+"], true)
}

fn bounded(rng: &mut ChaCha8Rng, c: usize) -> String {
    let leaves: Vec<String> = affine_leaves(rng, c, 0.2).into_iter().map(leaf).collect();
    combine(rng, leaves, &["&", "|", "+"], true)
}

/// 100 positive, 100 linear and 50 bounded (at most 3 queries) reductions.
pub fn generate(seed: u64) -> Vec<CorpusEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(250);
    let mut push = |name: String, template: String, class: ReductionClass| {
        let reduction = TTReduction::from_template(&template, class).expect("generated templates parse");
        out.push(CorpusEntry { name, reduction });
    };
    for i in 0..100 {
        let t = positive(&mut rng);
        push(format!("positive-{i:03}"), t, ReductionClass::Positive);
    }
    for i in 0..100 {
        let t = linear(&mut rng);
        push(format!("linear-{i:03}"), t, ReductionClass::Linear);
    }
    for i in 0..50 {
        let c = rng.random_range(1..=3);
        let t = bounded(&mut rng, c);
        push(format!("btt{c}-{i:03}"), t, ReductionClass::Btt(c as u32));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::belongs_to;

    #[test]
    fn deterministic_and_well_classed() {
        let a = generate(CORPUS_SEED);
        assert_eq!(a, generate(CORPUS_SEED));
        assert_eq!(a.len(), 250);
        for e in &a {
            for n in 0..64 {
                let f = e.reduction.row(n).unwrap();
                assert!(belongs_to(&f, e.reduction.declared_class), "{}: {f}", e.name);
            }
        }
    }
}
