use std::collections::HashSet;

use proptest::prelude::*;
use ttlab::formulas::ReductionClass;
use ttlab::hammers::adversary::{
    adversary_btt, adversary_for, adversary_linear, adversary_positive, AdversaryConfig, AdversaryOutcome, Certificate,
};
use ttlab::hammers::corpus::{generate, CorpusEntry, CORPUS_SEED};
use ttlab::hammers::{either_encode, recheck_triggers, some_to_many, some_to_many_one, switching_reduction, Arity};
use ttlab::randomness::{Compressor, LengthEstimator};
use ttlab::streams::{pair_encode, some_to_many_one_source, some_to_many_source, Family, FamilyDesc};
use ttlab::{BitStream, Error, TTReduction};

fn red(t: &str, c: ReductionClass) -> TTReduction {
    TTReduction::from_template(t, c).unwrap()
}

fn witness_holds(r: &TTReduction, o: &AdversaryOutcome) -> bool {
    match o {
        AdversaryOutcome::Witness(w) => {
            w.witness.len() >= 32
                && w.witness
                    .iter()
                    .all(|&n| r.row(n).unwrap().eval_assignment(|p| w.oracle.bit(p).unwrap()) == w.forced)
        }
        AdversaryOutcome::Inconclusive { .. } => false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn injective_recoding_has_injective_sources(zs in prop::collection::vec(0u64..1 << 20, 1..200)) {
        let mut seen = std::collections::HashMap::new();
        for z in zs {
            let src = some_to_many_one_source(z).unwrap();
            if let Some(&other) = seen.get(&src) {
                prop_assert_eq!(other, z);
            }
            seen.insert(src, z);
        }
    }

    #[test]
    fn flipping_one_bit_touches_one_column(seed in any::<u64>(), pos in 0u64..1000) {
        let a = BitStream::prng(seed);
        let b = BitStream::prng(seed ^ 1);
        let e = either_encode(&a, &b);
        let flipped = if e.bit(pos).unwrap() { e.overlay(vec![], vec![pos]) } else { e.overlay(vec![pos], vec![]) }.unwrap();
        let diffs: Vec<u64> = (0..1000).filter(|&n| e.bit(n).unwrap() != flipped.bit(n).unwrap()).collect();
        prop_assert_eq!(diffs, vec![pos]);
    }

    #[test]
    fn linear_adversary_certifies(mul in 1u64..4, adds in prop::collection::btree_set(0u64..6, 1..4), negate in any::<bool>()) {
        let terms: Vec<String> = adds.iter().map(|a| format!("v[{mul}n+{a}]")).collect();
        let mut t = terms.join(" + ");
        if negate {
            t = format!("!({t})");
        }
        let r = red(&t, ReductionClass::Linear);
        let o = adversary_linear(&r, &AdversaryConfig::new(1024, 3)).unwrap();
        prop_assert!(witness_holds(&r, &o), "{}", t);
    }
}

#[test]
fn many_columns_rule_repeats_columns() {
    let b = BitStream::interleave(&[BitStream::zeros(), BitStream::prng(2)]);
    let a = some_to_many(&b);
    for j in 0..5 {
        for n in 0..200 {
            assert_eq!(a.bit(pair_encode(pair_encode(1, j), n)).unwrap(), b.bit(pair_encode(1, n)).unwrap());
        }
    }
    // ⟨⟨0,0⟩,0⟩ and ⟨⟨0,1⟩,0⟩ read the same source bit
    let sources: HashSet<u64> = [pair_encode(pair_encode(0, 0), 0), pair_encode(pair_encode(0, 1), 0)]
        .into_iter()
        .map(|z| some_to_many_source(z).unwrap())
        .collect();
    assert_eq!(sources.len(), 1);
    assert_eq!(some_to_many(&BitStream::zeros()).prefix(300).unwrap(), vec![false; 300]);
    assert_eq!(some_to_many_one(&BitStream::ones()).prefix(300).unwrap(), vec![true; 300]);
}

#[test]
fn switching_omega_arity_visits_new_columns() {
    let fam = Family::from_desc(&FamilyDesc::Padded {
        members: vec![BitStream::zeros().desc().clone(), BitStream::zeros().desc().clone()],
        rest: Box::new(BitStream::prng(3).desc().clone()),
    })
    .unwrap();
    let run = switching_reduction(&fam, Arity::Omega, &Compressor::default(), 4096).unwrap();
    assert!(run.trace.final_column >= 2);
    assert_eq!(recheck_triggers(&fam, Arity::Omega, &Compressor::default(), 4096).unwrap(), run.trace.events);
    let floors: Vec<u64> = run.trace.events.iter().map(|e| e.floor_before).collect();
    assert_eq!(floors, (0..floors.len() as u64).collect::<Vec<_>>());
}

#[test]
fn ideal_estimator_never_switches() {
    let fam = Family::from_desc(&FamilyDesc::Prng { base_seed: 1 }).unwrap();
    let run = switching_reduction(&fam, Arity::Finite(3), &LengthEstimator, 2048).unwrap();
    assert!(run.trace.events.is_empty());
    assert!(switching_reduction(&fam, Arity::Finite(0), &LengthEstimator, 10).is_err());
}

#[test]
fn positive_adversary_cases() {
    let cfg = AdversaryConfig::new(1024, 5);
    let conj = red("v[2n] & v[2n+2]", ReductionClass::Conjunctive);
    let o = adversary_positive(&conj, &cfg).unwrap();
    assert!(witness_holds(&conj, &o));
    let w = o.witness().unwrap();
    assert!(w.forced);
    assert_eq!(w.certificate, Certificate::PositiveAllClausesTouch { parity: ttlab::hammers::adversary::Parity::Even });
    let odd = red("v[2n+1] | v[4n+3]", ReductionClass::Disjunctive);
    assert!(witness_holds(&odd, &adversary_positive(&odd, &cfg).unwrap()));
}

#[test]
fn btt_adversary_certifies() {
    let cfg = AdversaryConfig::new(1024, 7);
    for t in ["v[n] & !v[n+1]", "(v[2n] + v[2n+1]) | v[3]", "!(v[3n] | v[3n+2]) + v[3n+1]"] {
        let r = red(t, ReductionClass::Btt(3));
        assert!(witness_holds(&r, &adversary_btt(&r, 3, &cfg).unwrap()), "{t}");
    }
}

#[test]
fn adversary_refuses_unbounded_classes() {
    let r = red("v[n]", ReductionClass::Tt);
    assert!(matches!(adversary_for(&r, &AdversaryConfig::new(64, 0)), Err(Error::Precondition(_))));
    let wrong = red("v[n] & v[n+1]", ReductionClass::Linear);
    assert!(adversary_for(&wrong, &AdversaryConfig::new(64, 0)).is_err());
}

#[test]
fn shipped_corpus_matches_generator() {
    let text = include_str!("../data/adversary_corpus.json");
    let shipped: Vec<CorpusEntry> = serde_json::from_str(text).unwrap();
    assert_eq!(shipped, generate(CORPUS_SEED));
}
