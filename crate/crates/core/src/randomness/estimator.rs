use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Compressor, ExternalEstimator};
use crate::error::{Error, Result};
use crate::streams::BitStream;

/// An upper estimate of prefix complexity, approximable from above: for a
/// fixed string the estimate never increases with `stage`.
pub trait ComplexityEstimator: Send + Sync {
    fn name(&self) -> String;

    /// Estimated code length of `bits` in bits.
    fn estimate(&self, bits: &[bool], stage: u64) -> Result<u64>;

    /// Estimates of `bits[..n]` for every `n` in `0..=bits.len()`.
    fn estimate_prefixes(&self, bits: &[bool], stage: u64) -> Result<Vec<u64>> {
        (0..=bits.len()).map(|n| self.estimate(&bits[..n], stage)).collect()
    }

    /// Stages with equal epochs produce identical estimates.
    fn epoch(&self, _stage: u64) -> u64 {
        0
    }
}

/// Returns `|σ|`.
#[derive(Debug, Clone, Copy, Default)]
pub struct LengthEstimator;

impl ComplexityEstimator for LengthEstimator {
    fn name(&self) -> String {
        "length".into()
    }

    fn estimate(&self, bits: &[bool], _stage: u64) -> Result<u64> {
        Ok(bits.len() as u64)
    }

    fn estimate_prefixes(&self, bits: &[bool], _stage: u64) -> Result<Vec<u64>> {
        Ok((0..=bits.len() as u64).collect())
    }
}

/// Returns 0.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroEstimator;

impl ComplexityEstimator for ZeroEstimator {
    fn name(&self) -> String {
        "zero".into()
    }

    fn estimate(&self, _bits: &[bool], _stage: u64) -> Result<u64> {
        Ok(0)
    }
}

/// Returns `⌈|σ|·num/den⌉`.
#[derive(Debug, Clone, Copy)]
pub struct ScaledEstimator {
    pub num: u64,
    pub den: u64,
}

impl ComplexityEstimator for ScaledEstimator {
    fn name(&self) -> String {
        format!("scaled:{}/{}", self.num, self.den)
    }

    fn estimate(&self, bits: &[bool], _stage: u64) -> Result<u64> {
        Ok((bits.len() as u64 * self.num).div_ceil(self.den))
    }
}

/// Returns `2·⌈log₂|σ|⌉` (0 for strings of length at most 1).
#[derive(Debug, Clone, Copy, Default)]
pub struct LogEstimator;

pub(crate) fn ceil_log2(n: u64) -> u64 {
    if n <= 1 {
        0
    } else {
        u64::from(64 - (n - 1).leading_zeros())
    }
}

impl ComplexityEstimator for LogEstimator {
    fn name(&self) -> String {
        "log".into()
    }

    fn estimate(&self, bits: &[bool], _stage: u64) -> Result<u64> {
        Ok(2 * ceil_log2(bits.len() as u64))
    }
}

/// Serializable choice of estimator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EstimatorSpec {
    Length,
    Zero,
    Scaled { num: u64, den: u64 },
    Log,
    Compressor {
        #[serde(default = "default_max_level")]
        max_level: u32,
    },
    External {
        program: String,
        #[serde(default)]
        args: Vec<String>,
    },
}

fn default_max_level() -> u32 {
    Compressor::DEFAULT_MAX_LEVEL
}

impl Default for EstimatorSpec {
    fn default() -> Self {
        EstimatorSpec::Compressor {
            max_level: Compressor::DEFAULT_MAX_LEVEL,
        }
    }
}

impl EstimatorSpec {
    pub fn build(&self) -> Result<Arc<dyn ComplexityEstimator>> {
        Ok(match self {
            EstimatorSpec::Length => Arc::new(LengthEstimator),
            EstimatorSpec::Zero => Arc::new(ZeroEstimator),
            EstimatorSpec::Scaled { num, den } => {
                if *den == 0 {
                    return Err(Error::InvalidInput("scaled estimator needs a nonzero denominator".into()));
                }
                Arc::new(ScaledEstimator { num: *num, den: *den })
            }
            EstimatorSpec::Log => Arc::new(LogEstimator),
            EstimatorSpec::Compressor { max_level } => Arc::new(Compressor::new(*max_level)),
            EstimatorSpec::External { program, args } => {
                Arc::new(ExternalEstimator::new(program.clone(), args.clone()))
            }
        })
    }
}

impl fmt::Display for EstimatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EstimatorSpec::Length => f.write_str("length"),
            EstimatorSpec::Zero => f.write_str("zero"),
            EstimatorSpec::Scaled { num, den } => write!(f, "scaled:{num}/{den}"),
            EstimatorSpec::Log => f.write_str("log"),
            EstimatorSpec::Compressor { max_level } if *max_level == Compressor::DEFAULT_MAX_LEVEL => {
                f.write_str("compressor")
            }
            EstimatorSpec::Compressor { max_level } => write!(f, "compressor:{max_level}"),
            EstimatorSpec::External { program, args } => {
                write!(f, "external:{program}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                Ok(())
            }
        }
    }
}

/// Accepts `length`, `zero`, `log`, `scaled:NUM/DEN`, `compressor`,
/// `compressor:LEVEL` and `external:PROGRAM [ARGS…]`.
impl FromStr for EstimatorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("unknown estimator {s:?}"));
        let (head, rest) = match s.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (s, None),
        };
        Ok(match (head, rest) {
            ("length", None) => EstimatorSpec::Length,
            ("zero", None) => EstimatorSpec::Zero,
            ("log", None) => EstimatorSpec::Log,
            ("compressor", None) => EstimatorSpec::default(),
            ("compressor", Some(level)) => EstimatorSpec::Compressor {
                max_level: level.parse().map_err(|_| bad())?,
            },
            ("scaled", Some(frac)) => {
                let (n, d) = frac.split_once('/').ok_or_else(bad)?;
                EstimatorSpec::Scaled {
                    num: n.parse().map_err(|_| bad())?,
                    den: d.parse().map_err(|_| bad())?,
                }
            }
            ("external", Some(cmd)) => {
                let mut parts = cmd.split_whitespace().map(str::to_string);
                EstimatorSpec::External {
                    program: parts.next().ok_or_else(bad)?,
                    args: parts.collect(),
                }
            }
            _ => return Err(bad()),
        })
    }
}

/// Largest `n − estimate(prefix(n))` over `n ≤ upto`, floored at 0.
pub fn deficiency(e: &dyn ComplexityEstimator, s: &BitStream, upto: u64, stage: u64) -> Result<u64> {
    let bits = s.prefix(upto)?;
    let est = e.estimate_prefixes(&bits, stage)?;
    Ok(est
        .iter()
        .enumerate()
        .map(|(n, &k)| (n as u64).saturating_sub(k))
        .max()
        .unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deficiency_examples() {
        let s = BitStream::prng(1);
        assert_eq!(deficiency(&LengthEstimator, &s, 100, 0).unwrap(), 0);
        assert_eq!(deficiency(&ZeroEstimator, &s, 8, 0).unwrap(), 8);
        let half = ScaledEstimator { num: 1, den: 2 };
        assert_eq!(deficiency(&half, &s, 10, 0).unwrap(), 5);
    }

    #[test]
    fn log_values() {
        assert_eq!(LogEstimator.estimate(&[], 0).unwrap(), 0);
        assert_eq!(LogEstimator.estimate(&[true], 0).unwrap(), 0);
        assert_eq!(LogEstimator.estimate(&[true; 2], 0).unwrap(), 2);
        assert_eq!(LogEstimator.estimate(&[true; 5], 0).unwrap(), 6);
        assert_eq!(LogEstimator.estimate(&[true; 512], 0).unwrap(), 18);
    }

    #[test]
    fn spec_text_roundtrip() {
        for text in ["length", "zero", "log", "scaled:1/2", "compressor", "compressor:5", "external:gzip -c"] {
            let spec: EstimatorSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
        assert!("scaled:1".parse::<EstimatorSpec>().is_err());
        assert!("bogus".parse::<EstimatorSpec>().is_err());
    }

    #[test]
    fn spec_json() {
        let spec: EstimatorSpec = serde_json::from_str(r#"{"kind":"compressor"}"#).unwrap();
        assert_eq!(spec, EstimatorSpec::default());
        assert!(EstimatorSpec::Scaled { num: 1, den: 0 }.build().is_err());
    }
}
