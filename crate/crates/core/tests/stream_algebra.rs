use proptest::prelude::*;
use ttlab::streams::{join_over_position, Family, FamilyDesc};
use ttlab::{BitStream, StreamDesc};

fn leaf() -> impl Strategy<Value = BitStream> {
    prop_oneof![
        any::<u64>().prop_map(BitStream::prng),
        "[01]{1,7}".prop_map(|p| BitStream::periodic(&p).unwrap()),
        (prop::collection::vec(any::<bool>(), 0..64), any::<bool>()).prop_map(|(p, t)| BitStream::explicit(&p, t)),
        any::<bool>().prop_map(BitStream::constant),
    ]
}

fn stream() -> impl Strategy<Value = BitStream> {
    leaf().prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|s| s.complement()),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| BitStream::join(&a, &b)),
            prop::collection::vec(inner, 1..4).prop_map(|v| BitStream::interleave(&v)),
        ]
    })
}

const N: u64 = 600;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn join_halves(a in stream(), b in stream()) {
        let j = BitStream::join(&a, &b);
        for n in 0..N {
            prop_assert_eq!(j.bit(2 * n).unwrap(), a.bit(n).unwrap());
            prop_assert_eq!(j.bit(2 * n + 1).unwrap(), b.bit(n).unwrap());
        }
    }

    #[test]
    fn interleave_positions(parts in prop::collection::vec(stream(), 1..5)) {
        let k = parts.len() as u64;
        let s = BitStream::interleave(&parts);
        for n in 0..N {
            prop_assert_eq!(s.bit(n).unwrap(), parts[(n % k) as usize].bit(n / k).unwrap());
        }
    }

    #[test]
    fn complement_is_involutive(a in stream()) {
        let c = a.complement();
        for n in 0..N {
            prop_assert_ne!(c.bit(n).unwrap(), a.bit(n).unwrap());
        }
        prop_assert_eq!(c.complement().prefix(N).unwrap(), a.prefix(N).unwrap());
    }

    #[test]
    fn description_roundtrip(a in stream()) {
        let text = serde_json::to_string(&a).unwrap();
        let back: BitStream = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.prefix(N).unwrap(), a.prefix(N).unwrap());
        let desc: StreamDesc = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&desc, a.desc());
    }

    #[test]
    fn join_over_places_nth_bits(a in stream(), b in stream(), seed in any::<u64>()) {
        let x = BitStream::prng(seed);
        let j = BitStream::join_over(&a, &b, &x);
        for n in 0..64 {
            let p = join_over_position(&x, true, n, 4096).unwrap();
            prop_assert_eq!(j.bit(p).unwrap(), a.bit(n).unwrap());
            let q = join_over_position(&x, false, n, 4096).unwrap();
            prop_assert_eq!(j.bit(q).unwrap(), b.bit(n).unwrap());
        }
    }

    #[test]
    fn overlay_forces_positions(a in stream(), set in prop::collection::btree_set(0u64..300, 0..10)) {
        let clear: Vec<u64> = (300..310).collect();
        let o = a.overlay(set.iter().copied().collect(), clear.clone()).unwrap();
        for n in 0..320 {
            let expect = if set.contains(&n) { true } else if clear.contains(&n) { false } else { a.bit(n).unwrap() };
            prop_assert_eq!(o.bit(n).unwrap(), expect);
        }
    }

    #[test]
    fn splice_switches_sources(a in stream(), b in stream(), cut in 1u64..500) {
        let s = BitStream::splice(vec![(0, a.clone()), (cut, b.clone())]).unwrap();
        for n in 0..N {
            let src = if n < cut { &a } else { &b };
            prop_assert_eq!(s.bit(n).unwrap(), src.bit(n).unwrap());
        }
    }
}

#[test]
fn principal_function_lists_ones() {
    let s = BitStream::periodic("0110").unwrap();
    let ones: Vec<u64> = (0..6).map(|n| s.principal(n, 100).unwrap()).collect();
    assert_eq!(ones, vec![1, 2, 5, 6, 9, 10]);
    assert!(BitStream::zeros().principal(0, 50).is_err());
}

#[test]
fn join_over_with_finite_selector() {
    let j = BitStream::join_over(&BitStream::ones(), &BitStream::zeros(), &BitStream::explicit(&[true], false));
    assert!(j.bit(0).unwrap());
    assert!(!j.bit(5).unwrap());
}

#[test]
fn prng_family_members_are_seeded_streams() {
    let fam = Family::from_desc(&FamilyDesc::Prng { base_seed: 40 }).unwrap();
    for i in 0..5 {
        assert_eq!(fam.member(i).unwrap().prefix(200).unwrap(), BitStream::prng(40 + i).prefix(200).unwrap());
    }
}

#[test]
fn constructors_reject_bad_input() {
    assert!(BitStream::periodic("").is_err());
    assert!(BitStream::periodic("012").is_err());
    assert!(BitStream::splice(vec![(3, BitStream::zeros())]).is_err());
    assert!(BitStream::zeros().overlay(vec![1], vec![1]).is_err());
    assert!(serde_json::from_str::<BitStream>(r#"{"kind":"periodic","pattern":""}"#).is_err());
}
