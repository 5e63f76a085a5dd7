use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::streams::BitStream;
use crate::util::bit01;

/// A propositional formula over oracle positions.
///
/// `Var { pos }` stands for the oracle bit at `pos`. `And`, `Or` and `Xor`
/// are n-ary; an empty `And` is true and an empty `Or` or `Xor` is false.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum Formula {
    Var { pos: u64 },
    Const {
        #[serde(with = "bit01")]
        value: bool,
    },
    Not { child: Box<Formula> },
    And { children: Vec<Formula> },
    Or { children: Vec<Formula> },
    Xor { children: Vec<Formula> },
}

impl Formula {
    pub fn var(pos: u64) -> Self {
        Formula::Var { pos }
    }

    pub fn constant(value: bool) -> Self {
        Formula::Const { value }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(child: Formula) -> Self {
        Formula::Not {
            child: Box::new(child),
        }
    }

    pub fn and(children: Vec<Formula>) -> Self {
        Formula::And { children }
    }

    pub fn or(children: Vec<Formula>) -> Self {
        Formula::Or { children }
    }

    pub fn xor(children: Vec<Formula>) -> Self {
        Formula::Xor { children }
    }

    /// Positions read by the formula.
    pub fn variables(&self) -> BTreeSet<u64> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<u64>) {
        match self {
            Formula::Var { pos } => {
                out.insert(*pos);
            }
            Formula::Const { .. } => {}
            Formula::Not { child } => child.collect_vars(out),
            Formula::And { children } | Formula::Or { children } | Formula::Xor { children } => {
                for c in children {
                    c.collect_vars(out);
                }
            }
        }
    }

    /// Evaluates with `lookup` supplying the bit at each variable.
    pub fn eval_with<F>(&self, lookup: &mut F) -> Result<bool>
    where
        F: FnMut(u64) -> Result<bool>,
    {
        Ok(match self {
            Formula::Var { pos } => lookup(*pos)?,
            Formula::Const { value } => *value,
            Formula::Not { child } => !child.eval_with(lookup)?,
            Formula::And { children } => {
                for c in children {
                    if !c.eval_with(lookup)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or { children } => {
                for c in children {
                    if c.eval_with(lookup)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Xor { children } => {
                let mut acc = false;
                for c in children {
                    acc ^= c.eval_with(lookup)?;
                }
                acc
            }
        })
    }

    /// Truth value with `oracle(pos)` substituted for every variable.
    pub fn evaluate(&self, oracle: &BitStream) -> Result<bool> {
        self.eval_with(&mut |p| oracle.bit(p))
    }

    /// Truth value under a total assignment given as a closure.
    pub fn eval_assignment(&self, assignment: impl Fn(u64) -> bool) -> bool {
        self.eval_with(&mut |p| Ok(assignment(p)))
            .expect("infallible lookup")
    }

    /// Replaces `Var { pos }` by `Const` wherever `fixed(pos)` is `Some`.
    pub fn substitute(&self, fixed: &impl Fn(u64) -> Option<bool>) -> Formula {
        match self {
            Formula::Var { pos } => match fixed(*pos) {
                Some(value) => Formula::Const { value },
                None => self.clone(),
            },
            Formula::Const { .. } => self.clone(),
            Formula::Not { child } => Formula::not(child.substitute(fixed)),
            Formula::And { children } => {
                Formula::and(children.iter().map(|c| c.substitute(fixed)).collect())
            }
            Formula::Or { children } => {
                Formula::or(children.iter().map(|c| c.substitute(fixed)).collect())
            }
            Formula::Xor { children } => {
                Formula::xor(children.iter().map(|c| c.substitute(fixed)).collect())
            }
        }
    }

    /// Rewrites every variable position through `f`.
    pub fn map_vars(&self, f: &impl Fn(u64) -> u64) -> Formula {
        match self {
            Formula::Var { pos } => Formula::var(f(*pos)),
            Formula::Const { .. } => self.clone(),
            Formula::Not { child } => Formula::not(child.map_vars(f)),
            Formula::And { children } => Formula::and(children.iter().map(|c| c.map_vars(f)).collect()),
            Formula::Or { children } => Formula::or(children.iter().map(|c| c.map_vars(f)).collect()),
            Formula::Xor { children } => Formula::xor(children.iter().map(|c| c.map_vars(f)).collect()),
        }
    }

    pub(crate) fn try_map_vars<E>(&self, f: &impl Fn(u64) -> Result<u64, E>) -> Result<Formula, E> {
        let all = |cs: &[Formula]| cs.iter().map(|c| c.try_map_vars(f)).collect::<Result<Vec<_>, E>>();
        Ok(match self {
            Formula::Var { pos } => Formula::var(f(*pos)?),
            Formula::Const { .. } => self.clone(),
            Formula::Not { child } => Formula::not(child.try_map_vars(f)?),
            Formula::And { children } => Formula::and(all(children)?),
            Formula::Or { children } => Formula::or(all(children)?),
            Formula::Xor { children } => Formula::xor(all(children)?),
        })
    }

    pub(crate) fn write_with(
        &self,
        out: &mut fmt::Formatter<'_>,
        var: &dyn Fn(u64, &mut fmt::Formatter<'_>) -> fmt::Result,
    ) -> fmt::Result {
        self.write_prec(out, 0, var)
    }

    fn write_prec(
        &self,
        out: &mut fmt::Formatter<'_>,
        ctx: u8,
        var: &dyn Fn(u64, &mut fmt::Formatter<'_>) -> fmt::Result,
    ) -> fmt::Result {
        let (children, prec, op) = match self {
            Formula::Var { pos } => return var(*pos, out),
            Formula::Const { value } => return write!(out, "{}", u8::from(*value)),
            Formula::Not { child } => {
                out.write_str("!")?;
                return child.write_prec(out, 4, var);
            }
            Formula::Or { children } => (children, 1, " | "),
            Formula::Xor { children } => (children, 2, " + "),
            Formula::And { children } => (children, 3, " & "),
        };
        match children.len() {
            0 => write!(out, "{}", u8::from(matches!(self, Formula::And { .. }))),
            1 => children[0].write_prec(out, ctx, var),
            _ => {
                let paren = ctx >= prec;
                if paren {
                    out.write_str("(")?;
                }
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        out.write_str(op)?;
                    }
                    c.write_prec(out, prec, var)?;
                }
                if paren {
                    out.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with(f, &|pos, f| write!(f, "v{pos}"))
    }
}
