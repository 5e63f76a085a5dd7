use std::io::Write;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::ComplexityEstimator;
use crate::error::{Error, Result};
use crate::streams::{BitStream, IndexSet};

/// Exact ratio, serialized as the string `"p/q"`.
pub type Rational = Ratio<u64>;

mod ratio_text {
    use super::Rational;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        let (n, q) = text
            .split_once('/')
            .ok_or_else(|| de::Error::custom("expected p/q"))?;
        let n: u64 = n.parse().map_err(de::Error::custom)?;
        let q: u64 = q.parse().map_err(de::Error::custom)?;
        if q == 0 {
            return Err(de::Error::custom("zero denominator"));
        }
        Ok(Rational::new(n, q))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub n: u64,
    pub estimate: u64,
    #[serde(with = "ratio_text")]
    pub ratio: Rational,
}

/// Finite-horizon stand-ins for the four dimensions.
///
/// All four are taken over the window `[floor, horizon]` with
/// `floor = max(1, horizon/2)`: tails `[m, horizon]` for `1 ≤ m ≤ floor`
/// and every supplied index set intersected with the window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub estimator: String,
    pub horizon: u64,
    pub floor: u64,
    pub profile: Vec<ProfilePoint>,
    #[serde(with = "ratio_text")]
    pub hausdorff: Rational,
    #[serde(with = "ratio_text")]
    pub packing: Rational,
    #[serde(with = "ratio_text")]
    pub complex_packing: Rational,
    #[serde(with = "ratio_text")]
    pub inescapable: Rational,
    /// Indices of family members with no element in the window.
    pub skipped: Vec<usize>,
}

impl DimensionReport {
    /// Writes the profile as `n,estimate,ratio` rows.
    pub fn write_profile_csv(&self, writer: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["n", "estimate", "ratio"])?;
        for p in &self.profile {
            let ratio = *p.ratio.numer() as f64 / *p.ratio.denom() as f64;
            w.write_record([p.n.to_string(), p.estimate.to_string(), format!("{ratio:.6}")])?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

fn min_max(values: impl Iterator<Item = Rational>) -> Option<(Rational, Rational)> {
    values.fold(None, |acc, r| match acc {
        None => Some((r, r)),
        Some((lo, hi)) => Some((lo.min(r), hi.max(r))),
    })
}

/// Profile of `estimate(prefix(n))/n` for `1 ≤ n ≤ horizon`, evaluated at
/// the final stage `horizon` and clamped to `[0, 1]`, with the four
/// dimension values over tails and `family`.
pub fn dimension_profile(
    e: &dyn ComplexityEstimator,
    s: &BitStream,
    horizon: u64,
    family: &[IndexSet],
) -> Result<DimensionReport> {
    if horizon == 0 {
        return Err(Error::InvalidInput("dimension profile needs a positive horizon".into()));
    }
    if family.is_empty() {
        return Err(Error::InvalidInput("index-set family is empty".into()));
    }
    let bits = s.prefix(horizon)?;
    let est = e.estimate_prefixes(&bits, horizon)?;
    let ratio = |n: u64| Rational::new(est[n as usize].min(n), n);
    let profile: Vec<ProfilePoint> = (1..=horizon)
        .map(|n| ProfilePoint {
            n,
            estimate: est[n as usize],
            ratio: ratio(n),
        })
        .collect();
    let floor = (horizon / 2).max(1);

    // suffix extremes over [m, horizon]
    let mut suffix: Vec<(Rational, Rational)> = vec![(Rational::from_integer(0), Rational::from_integer(0)); floor as usize + 1];
    let mut lo = ratio(horizon);
    let mut hi = lo;
    for n in (1..=horizon).rev() {
        lo = lo.min(ratio(n));
        hi = hi.max(ratio(n));
        if n <= floor {
            suffix[n as usize] = (lo, hi);
        }
    }
    let tails = (1..=floor).map(|m| suffix[m as usize]);

    let mut skipped = Vec::new();
    let mut members = Vec::new();
    for (i, set) in family.iter().enumerate() {
        let elems = set.elements_in(floor, horizon + 1)?;
        match min_max(elems.iter().map(|&n| ratio(n))) {
            Some(mm) => members.push(mm),
            None => {
                log::warn!("index set {i} has no element in [{floor}, {horizon}]; skipped");
                skipped.push(i);
            }
        }
    }

    let hausdorff = tails.clone().map(|t| t.0).max().expect("at least one tail");
    let packing = tails.clone().map(|t| t.1).min().expect("at least one tail");
    let complex_packing = tails
        .clone()
        .chain(members.iter().copied())
        .map(|t| t.0)
        .max()
        .expect("at least one tail");
    let inescapable = tails
        .chain(members.iter().copied())
        .map(|t| t.1)
        .min()
        .expect("at least one tail");
    Ok(DimensionReport {
        estimator: e.name(),
        horizon,
        floor,
        profile,
        hausdorff,
        packing,
        complex_packing,
        inescapable,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randomness::{LengthEstimator, LogEstimator};

    #[test]
    fn ideal_estimator_gives_one() {
        let r = dimension_profile(
            &LengthEstimator,
            &BitStream::prng(1),
            256,
            &[IndexSet::arithmetic(2, 0).unwrap()],
        )
        .unwrap();
        let one = Rational::from_integer(1);
        assert_eq!((r.hausdorff, r.packing, r.complex_packing, r.inescapable), (one, one, one, one));
    }

    #[test]
    fn log_estimator_packing_is_small() {
        let r = dimension_profile(&LogEstimator, &BitStream::zeros(), 1024, &[IndexSet::tail(0)]).unwrap();
        assert!(r.packing <= Rational::new(5, 100), "{}", r.packing);
        assert_eq!(r.packing, Rational::new(20, 513));
    }

    #[test]
    fn members_outside_window_are_skipped() {
        let r = dimension_profile(
            &LogEstimator,
            &BitStream::zeros(),
            64,
            &[IndexSet::explicit(vec![1, 2, 3]), IndexSet::tail(0)],
        )
        .unwrap();
        assert_eq!(r.skipped, vec![0]);
        assert!(dimension_profile(&LogEstimator, &BitStream::zeros(), 64, &[]).is_err());
    }

    #[test]
    fn report_json_uses_exact_ratios() {
        let r = dimension_profile(&LogEstimator, &BitStream::zeros(), 16, &[IndexSet::tail(0)]).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["packing"], "8/9");
        let back: DimensionReport = serde_json::from_value(json).unwrap();
        assert_eq!(back, r);
    }
}
