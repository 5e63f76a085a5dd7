use super::{rows_in_class, AdversaryConfig, AdversaryOutcome, AdversaryWitness, Certificate, Parity};
use crate::error::Result;
use crate::formulas::{to_cnf, Formula, ReductionClass};
use crate::reductions::TTReduction;
use crate::streams::BitStream;

fn clauses(cnf: Formula) -> Vec<Vec<Formula>> {
    match cnf {
        Formula::And { children } => children
            .into_iter()
            .map(|c| match c {
                Formula::Or { children } => children,
                other => vec![other],
            })
            .collect(),
        other => vec![vec![other]],
    }
}

/// Whether the clause is made true by setting every `parity` bit to 1.
fn touches(clause: &[Formula], parity: Parity) -> bool {
    clause.iter().any(|lit| match lit {
        Formula::Var { pos } => Parity::of(*pos) == parity,
        Formula::Const { value } => *value,
        _ => false,
    })
}

/// Adversary for positive reductions. Cases are tried in the order:
/// all clauses touch the even half (oracle `ω ⊕ R`, forced 1); some clause
/// misses it (oracle `R ⊕ ∅`, forced 0); then the same two with the halves
/// swapped.
pub fn adversary_positive(r: &TTReduction, cfg: &AdversaryConfig) -> Result<AdversaryOutcome> {
    let rows = rows_in_class(r, ReductionClass::Positive, cfg.horizon)?;
    let cnfs: Vec<Vec<Vec<Formula>>> = rows
        .iter()
        .map(|f| to_cnf(f).map(clauses))
        .collect::<Result<_>>()?;
    for parity in [Parity::Even, Parity::Odd] {
        let all_touch = |c: &Vec<Vec<Formula>>| c.iter().all(|cl| touches(cl, parity));
        let touched: Vec<u64> = (0..cfg.horizon).filter(|&n| all_touch(&cnfs[n as usize])).collect();
        if touched.len() >= cfg.threshold {
            return Ok(AdversaryOutcome::Witness(AdversaryWitness {
                oracle: parity.oracle(&BitStream::ones(), cfg.seed),
                witness: touched,
                forced: true,
                certificate: Certificate::PositiveAllClausesTouch { parity },
                hardcoded: Vec::new(),
                depth: 0,
            }));
        }
        let untouched: Vec<u64> = (0..cfg.horizon).filter(|&n| !all_touch(&cnfs[n as usize])).collect();
        if untouched.len() >= cfg.threshold {
            // the missed half is the fixed all-zero one
            return Ok(AdversaryOutcome::Witness(AdversaryWitness {
                oracle: parity.other().oracle(&BitStream::zeros(), cfg.seed),
                witness: untouched,
                forced: false,
                certificate: Certificate::PositiveUntouchedClause { parity },
                hardcoded: Vec::new(),
                depth: 0,
            }));
        }
    }
    Ok(AdversaryOutcome::Inconclusive {
        reason: format!(
            "fewer than {} rows in every case below horizon {}",
            cfg.threshold, cfg.horizon
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(t: &str) -> AdversaryWitness {
        let r = TTReduction::from_template(t, ReductionClass::Positive).unwrap();
        let cfg = AdversaryConfig::new(256, 7);
        let w = adversary_positive(&r, &cfg).unwrap().witness().cloned().unwrap();
        let check = w.verify(&r, cfg.threshold).unwrap();
        assert!(check.holds, "{t}: {check:?}");
        w
    }

    #[test]
    fn adjacent_pairs_are_case_one_even() {
        let w = run("v[2n] | v[2n+1]");
        assert_eq!(w.certificate, Certificate::PositiveAllClausesTouch { parity: Parity::Even });
        assert!(w.forced);
        assert_eq!(w.witness.len(), 256);
    }

    #[test]
    fn odd_only_rows_are_case_two() {
        let w = run("v[2n+1]");
        assert_eq!(w.certificate, Certificate::PositiveUntouchedClause { parity: Parity::Even });
        assert!(!w.forced);
        assert_eq!(w.oracle, Parity::Odd.oracle(&BitStream::zeros(), 7));
    }

    #[test]
    fn constant_rows() {
        let w = run("1");
        assert!(w.forced);
        assert_eq!(w.witness.len(), 256);
    }

    #[test]
    fn small_horizon_is_inconclusive() {
        let r = TTReduction::from_template("v[n]", ReductionClass::Positive).unwrap();
        let cfg = AdversaryConfig::new(40, 1);
        assert!(matches!(
            adversary_positive(&r, &cfg).unwrap(),
            AdversaryOutcome::Inconclusive { .. }
        ));
    }

    #[test]
    fn non_positive_rows_are_rejected() {
        let r = TTReduction::from_template("!v[n]", ReductionClass::Tt).unwrap();
        assert!(adversary_positive(&r, &AdversaryConfig::new(64, 0)).is_err());
    }
}
