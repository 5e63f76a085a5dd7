use std::collections::{BTreeSet, HashSet};

use super::{rows_in_class, sorted, AdversaryConfig, AdversaryOutcome, AdversaryWitness, Certificate, Parity};
use crate::error::{Error, Result};
use crate::formulas::ReductionClass;
use crate::reductions::TTReduction;
use crate::streams::BitStream;

/// Adversary for linear reductions, built in stages from `∅ ⊕ R`.
///
/// Rows are scanned in order. A row that queries a bit of the chosen
/// parity that no earlier row queried becomes a target; if it currently
/// evaluates to 0, its least such fresh bit is set to 1, which flips it.
/// Fresh bits are never read by earlier rows, so earlier targets keep
/// their value 1. Even parity is tried first.
pub fn adversary_linear(r: &TTReduction, cfg: &AdversaryConfig) -> Result<AdversaryOutcome> {
    let rows = rows_in_class(r, ReductionClass::Linear, cfg.horizon)?;
    let mut best_count = 0;
    for parity in [Parity::Even, Parity::Odd] {
        let base = parity.oracle(&BitStream::zeros(), cfg.seed);
        let mut flipped: BTreeSet<u64> = BTreeSet::new();
        let mut queried: HashSet<u64> = HashSet::new();
        let mut targets = Vec::new();
        for (n, f) in rows.iter().enumerate() {
            let vars = f.variables();
            let fresh = vars
                .iter()
                .copied()
                .find(|&p| Parity::of(p) == parity && !queried.contains(&p));
            if let Some(v) = fresh {
                let value = f.eval_with(&mut |p| {
                    if flipped.contains(&p) {
                        Ok(true)
                    } else {
                        base.bit(p)
                    }
                })?;
                if !value {
                    flipped.insert(v);
                }
                targets.push(n as u64);
            }
            queried.extend(vars);
        }
        if targets.len() >= cfg.threshold {
            let set = sorted(flipped);
            return Ok(AdversaryOutcome::Witness(AdversaryWitness {
                oracle: base.overlay(set.clone(), Vec::new())?,
                witness: targets,
                forced: true,
                certificate: Certificate::LinearFreshBits { parity, flipped: set },
                hardcoded: Vec::new(),
                depth: 0,
            }));
        }
        best_count = best_count.max(targets.len());
    }
    log::debug!("linear adversary found at most {best_count} fresh-bit rows");
    Err(Error::NoFreshBits { horizon: cfg.horizon })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::Formula;

    fn reduction(t: &str) -> TTReduction {
        TTReduction::from_template(t, ReductionClass::Linear).unwrap()
    }

    #[test]
    fn identity_on_even_bits() {
        let r = reduction("v[2n]");
        let cfg = AdversaryConfig::new(200, 3);
        let w = adversary_linear(&r, &cfg).unwrap().witness().cloned().unwrap();
        assert_eq!(w.witness, (0..200).collect::<Vec<_>>());
        assert!(w.forced);
        assert!(w.verify(&r, cfg.threshold).unwrap().holds);
    }

    #[test]
    fn single_bit_is_not_enough() {
        let r = reduction("v0 + 1");
        assert!(matches!(
            adversary_linear(&r, &AdversaryConfig::new(500, 0)),
            Err(Error::NoFreshBits { horizon: 500 })
        ));
    }

    #[test]
    fn overlapping_sums_flip_the_designated_bit() {
        let r = reduction("v[2n] + v[2n+2]");
        let cfg = AdversaryConfig::new(300, 9);
        let w = adversary_linear(&r, &cfg).unwrap().witness().cloned().unwrap();
        assert!(w.verify(&r, cfg.threshold).unwrap().holds);
        // flipping a row's fresh bit back flips that row's value
        let Certificate::LinearFreshBits { flipped, .. } = &w.certificate else {
            panic!("wrong certificate")
        };
        let bit = flipped[0];
        let row = w
            .witness
            .iter()
            .copied()
            .find(|&n| r.row(n).unwrap().variables().contains(&bit))
            .unwrap();
        let f: Formula = r.row(row).unwrap();
        let with = f.evaluate(&w.oracle).unwrap();
        let without = f
            .eval_with(&mut |p| if p == bit { Ok(false) } else { w.oracle.bit(p) })
            .unwrap();
        assert_ne!(with, without);
    }

    #[test]
    fn odd_parity_fallback() {
        let r = reduction("v[2n+1] + v0");
        let cfg = AdversaryConfig::new(100, 1);
        let w = adversary_linear(&r, &cfg).unwrap().witness().cloned().unwrap();
        assert!(matches!(w.certificate, Certificate::LinearFreshBits { parity: Parity::Odd, .. }));
        assert!(w.verify(&r, cfg.threshold).unwrap().holds);
    }
}
