use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Formula;
use crate::error::Error;

/// The reducibility classes, ordered by the inclusion lattice of their row
/// shapes. Serialized as `many_one`, `btt(3)`, `btt_any` and so on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ReductionClass {
    One,
    ManyOne,
    Conjunctive,
    Disjunctive,
    Positive,
    Linear,
    Btt(u32),
    BttAny,
    Tt,
}

impl fmt::Display for ReductionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionClass::One => f.write_str("one"),
            ReductionClass::ManyOne => f.write_str("many_one"),
            ReductionClass::Conjunctive => f.write_str("conjunctive"),
            ReductionClass::Disjunctive => f.write_str("disjunctive"),
            ReductionClass::Positive => f.write_str("positive"),
            ReductionClass::Linear => f.write_str("linear"),
            ReductionClass::Btt(c) => write!(f, "btt({c})"),
            ReductionClass::BttAny => f.write_str("btt_any"),
            ReductionClass::Tt => f.write_str("tt"),
        }
    }
}

impl FromStr for ReductionClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        Ok(match s {
            "one" => ReductionClass::One,
            "many_one" | "m" => ReductionClass::ManyOne,
            "conjunctive" | "c" => ReductionClass::Conjunctive,
            "disjunctive" | "d" => ReductionClass::Disjunctive,
            "positive" | "p" => ReductionClass::Positive,
            "linear" | "l" => ReductionClass::Linear,
            "btt_any" | "btt" => ReductionClass::BttAny,
            "tt" => ReductionClass::Tt,
            _ => {
                let inner = s
                    .strip_prefix("btt(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| Error::InvalidInput(format!("unknown reduction class {s:?}")))?;
                ReductionClass::Btt(
                    inner
                        .trim()
                        .parse()
                        .map_err(|_| Error::InvalidInput(format!("bad btt bound in {s:?}")))?,
                )
            }
        })
    }
}

impl TryFrom<String> for ReductionClass {
    type Error = Error;

    fn try_from(s: String) -> Result<Self, Error> {
        s.parse()
    }
}

impl From<ReductionClass> for String {
    fn from(c: ReductionClass) -> String {
        c.to_string()
    }
}

/// Whether `a` sits below `b` in the reducibility lattice.
pub fn lattice_le(a: ReductionClass, b: ReductionClass) -> bool {
    use ReductionClass::*;
    if a == b || b == Tt {
        return true;
    }
    match a {
        One => b != Btt(0),
        ManyOne => !matches!(b, One | Btt(0)),
        Conjunctive | Disjunctive => b == Positive,
        Btt(c) => match b {
            Btt(d) => c <= d,
            BttAny => true,
            Linear => c <= 1,
            _ => false,
        },
        Positive | Linear | BttAny | Tt => false,
    }
}

fn is_atom(f: &Formula) -> bool {
    matches!(f, Formula::Var { .. } | Formula::Const { .. })
}

fn is_positive(f: &Formula) -> bool {
    match f {
        Formula::Var { .. } | Formula::Const { .. } => true,
        Formula::And { children } | Formula::Or { children } => children.iter().all(is_positive),
        Formula::Not { .. } | Formula::Xor { .. } => false,
    }
}

/// Linear shape: a mod-2 sum in which every variable occurs once.
fn is_linear(f: &Formula) -> bool {
    fn walk(f: &Formula, seen: &mut HashSet<u64>) -> bool {
        match f {
            Formula::Var { pos } => seen.insert(*pos),
            Formula::Const { .. } => true,
            Formula::Not { child } => walk(child, seen),
            Formula::Xor { children } => children.iter().all(|c| walk(c, seen)),
            Formula::And { .. } | Formula::Or { .. } => false,
        }
    }
    walk(f, &mut HashSet::new())
}

/// Every class the formula's shape belongs to directly: the connective
/// classes it satisfies, `btt(c)` for its variable count `c`, and `tt`.
pub fn classify(f: &Formula) -> BTreeSet<ReductionClass> {
    use ReductionClass::*;
    let mut out = BTreeSet::new();
    let atom = is_atom(f);
    if atom {
        out.insert(ManyOne);
    }
    match f {
        Formula::And { children } if children.iter().all(is_atom) => {
            out.insert(Conjunctive);
        }
        Formula::Or { children } if children.iter().all(is_atom) => {
            out.insert(Disjunctive);
        }
        _ if atom => {
            out.insert(Conjunctive);
            out.insert(Disjunctive);
        }
        _ => {}
    }
    if is_positive(f) {
        out.insert(Positive);
    }
    if is_linear(f) {
        out.insert(Linear);
    }
    out.insert(Btt(f.variables().len() as u32));
    out.insert(Tt);
    out
}

/// Whether `f` may appear as a row of a reduction of class `class`.
///
/// A one-one row is a single variable; injectivity across rows is checked
/// by the reduction, not here.
pub fn belongs_to(f: &Formula, class: ReductionClass) -> bool {
    if class == ReductionClass::One {
        return matches!(f, Formula::Var { .. });
    }
    classify(f).into_iter().any(|c| lattice_le(c, class))
}
