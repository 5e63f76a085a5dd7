use proptest::prelude::*;
use ttlab::randomness::segments::{double_segment_stream, segment_stream, wtt_stream, SegmentSchedule, WttSchedule};
use ttlab::randomness::{deficiency, dimension_profile, Compressor, ComplexityEstimator, EstimatorSpec, LogEstimator};
use ttlab::streams::FillMode;
use ttlab::{BitStream, IndexSet, UseBound};

fn spec() -> impl Strategy<Value = EstimatorSpec> {
    prop::sample::select(vec!["length", "zero", "log", "scaled:2/3", "compressor", "compressor:3"])
        .prop_map(|s| s.parse().unwrap())
}

fn bits() -> impl Strategy<Value = Vec<bool>> {
    prop_oneof![
        prop::collection::vec(any::<bool>(), 0..600),
        (0usize..600).prop_map(|n| vec![false; n]),
        ("[01]{1,5}", 0usize..600).prop_map(|(p, n)| p.bytes().cycle().take(n).map(|b| b == b'1').collect()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn prefix_estimates_match_single_calls(s in spec(), b in bits(), stage in 0u64..5000) {
        let e = s.build().unwrap();
        let all = e.estimate_prefixes(&b, stage).unwrap();
        prop_assert_eq!(all.len(), b.len() + 1);
        for n in (0..=b.len()).step_by(37) {
            prop_assert_eq!(all[n], e.estimate(&b[..n], stage).unwrap());
        }
    }

    /// Estimates never grow with the stage.
    #[test]
    fn estimates_approximate_from_above(b in bits(), s1 in 0u64..1 << 20, s2 in 0u64..1 << 20) {
        let e = Compressor::default();
        let (lo, hi) = (s1.min(s2), s1.max(s2));
        prop_assert!(e.estimate(&b, hi).unwrap() <= e.estimate(&b, lo).unwrap());
    }

    #[test]
    fn spec_text_roundtrip(s in spec()) {
        prop_assert_eq!(s.to_string().parse::<EstimatorSpec>().unwrap(), s.clone());
        let json = serde_json::to_string(&s).unwrap();
        prop_assert_eq!(serde_json::from_str::<EstimatorSpec>(&json).unwrap(), s);
    }

    #[test]
    fn dimensions_are_ordered(s in spec(), seed in any::<u64>(), horizon in 4u64..1500, mul in 1u64..6, add in 0u64..6) {
        let e = s.build().unwrap();
        let stream = segment_stream(&BitStream::prng(seed), &BitStream::periodic("01").unwrap());
        let family = vec![IndexSet::arithmetic(mul, add).unwrap(), IndexSet::tail(horizon / 3)];
        let r = dimension_profile(e.as_ref(), &stream, horizon, &family).unwrap();
        prop_assert!(r.hausdorff <= r.complex_packing && r.complex_packing <= r.packing);
        prop_assert!(r.hausdorff <= r.inescapable && r.inescapable <= r.packing);
        for p in &r.profile {
            prop_assert!(*p.ratio.numer() <= *p.ratio.denom());
        }
    }
}

#[test]
fn compressor_separates_random_from_structured() {
    let e = Compressor::default();
    let random = BitStream::prng(1).prefix(4096).unwrap();
    let zeros = vec![false; 4096];
    assert!(e.estimate(&random, 4096).unwrap() >= 4000);
    assert!(e.estimate(&zeros, 4096).unwrap() < 60);
}

#[test]
fn deficiency_of_zeros_grows() {
    let e = Compressor::default();
    let small = deficiency(&e, &BitStream::zeros(), 256, 256).unwrap();
    let large = deficiency(&e, &BitStream::zeros(), 2048, 2048).unwrap();
    assert!(large > small && small > 150);
    assert_eq!(deficiency(&e, &BitStream::prng(3), 2048, 2048).unwrap(), 0);
}

#[test]
fn log_stub_on_zeros() {
    let r = dimension_profile(&LogEstimator, &BitStream::zeros(), 1024, &[IndexSet::tail(1)]).unwrap();
    let packing = *r.packing.numer() as f64 / *r.packing.denom() as f64;
    assert!(packing <= 0.05, "{packing}");
}

#[test]
fn empty_family_is_rejected() {
    assert!(dimension_profile(&LogEstimator, &BitStream::zeros(), 64, &[]).is_err());
}

/// `s(k) = 2^(k²)`, recomputed by repeated doubling.
fn start(k: u32) -> u64 {
    (0..k * k).fold(1u64, |acc, _| acc * 2)
}

#[test]
fn segment_stream_follows_its_schedule() {
    let r = BitStream::prng(5);
    let ind = BitStream::periodic("0110").unwrap();
    let s = segment_stream(&r, &ind).prefix(4096).unwrap();
    for (n, &bit) in s.iter().enumerate() {
        let n = n as u64;
        // below s(1) the stream is 0
        let expect = match (0..=4).rev().find(|&k| start(k) <= n) {
            Some(k) if n >= start(1) => ind.bit(k as u64).unwrap() && r.bit(n - start(k)).unwrap(),
            _ => false,
        };
        assert_eq!(bit, expect, "position {n}");
    }
    assert_eq!(SegmentSchedule::k_of(4095), Some(3));
}

#[test]
fn double_segment_and_wtt_streams_are_deterministic() {
    let f = BitStream::prng(6);
    let x0 = BitStream::prng(7);
    for mode in [FillMode::ZeroFill, FillMode::FillerFill] {
        let a = double_segment_stream(&f, &x0, mode).prefix(2000).unwrap();
        let b = double_segment_stream(&f, &x0, mode).prefix(2000).unwrap();
        assert_eq!(a, b);
    }
    let w = wtt_stream(&f, &x0, &UseBound::identity());
    assert_eq!(w.prefix(1000).unwrap(), w.prefix(1000).unwrap());
    let sched = WttSchedule::new(&UseBound::identity());
    assert_eq!(&sched.lambda[..3], &[1, 2, 18]);
}
