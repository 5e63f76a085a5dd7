use super::Formula;
use crate::error::{Error, Result};

/// Clause-count ceiling for [`to_cnf`].
pub const CNF_CLAUSE_LIMIT: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Literal {
    Const(bool),
    Var(u64),
}

impl Literal {
    fn formula(self) -> Formula {
        match self {
            Literal::Const(value) => Formula::Const { value },
            Literal::Var(pos) => Formula::Var { pos },
        }
    }
}

fn clauses(f: &Formula) -> Result<Vec<Vec<Literal>>> {
    match f {
        Formula::Var { pos } => Ok(vec![vec![Literal::Var(*pos)]]),
        Formula::Const { value } => Ok(vec![vec![Literal::Const(*value)]]),
        Formula::And { children } => {
            let mut out = Vec::new();
            for c in children {
                out.extend(clauses(c)?);
                if out.len() > CNF_CLAUSE_LIMIT {
                    return Err(Error::CnfTooLarge { limit: CNF_CLAUSE_LIMIT });
                }
            }
            Ok(out)
        }
        Formula::Or { children } => {
            let mut acc: Vec<Vec<Literal>> = vec![Vec::new()];
            for c in children {
                let right = clauses(c)?;
                if acc.len().saturating_mul(right.len()) > CNF_CLAUSE_LIMIT {
                    return Err(Error::CnfTooLarge { limit: CNF_CLAUSE_LIMIT });
                }
                let mut next = Vec::with_capacity(acc.len() * right.len());
                for a in &acc {
                    for b in &right {
                        let mut clause = a.clone();
                        for lit in b {
                            if !clause.contains(lit) {
                                clause.push(*lit);
                            }
                        }
                        next.push(clause);
                    }
                }
                acc = next;
            }
            Ok(acc)
        }
        Formula::Not { .. } | Formula::Xor { .. } => Err(Error::NotPositive),
    }
}

/// Conjunctive normal form of a positive formula: an `And` of `Or` clauses
/// whose members are variables or constants.
pub fn to_cnf(f: &Formula) -> Result<Formula> {
    Ok(Formula::and(
        clauses(f)?
            .into_iter()
            .map(|c| Formula::or(c.into_iter().map(Literal::formula).collect()))
            .collect(),
    ))
}
