use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::parse::{ParseError, Parser, VarToken};
use super::Formula;
use crate::error::{Error, Result};

/// Position `mul·n + add` for row index `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Affine {
    pub mul: u64,
    pub add: u64,
}

impl Affine {
    pub fn at(&self, n: u64) -> Option<u64> {
        self.mul.checked_mul(n)?.checked_add(self.add)
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.mul, self.add) {
            (0, a) => write!(f, "v{a}"),
            (1, 0) => write!(f, "v[n]"),
            (1, a) => write!(f, "v[n+{a}]"),
            (m, 0) => write!(f, "v[{m}n]"),
            (m, a) => write!(f, "v[{m}n+{a}]"),
        }
    }
}

/// A formula skeleton whose variables are affine in the row index, written
/// like `v[2n] | v[2n+1]`. Plain `v<k>` denotes the fixed position `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct RowTemplate {
    // Var { pos: i } in the skeleton refers to vars[i]
    skeleton: Formula,
    vars: Vec<Affine>,
}

impl RowTemplate {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut vars = Vec::new();
        let skeleton = Parser::new(text, true, |tok| {
            let a = match tok {
                VarToken::Fixed(k) => Affine { mul: 0, add: k },
                VarToken::Affine(a) => a,
            };
            vars.push(a);
            vars.len() as u64 - 1
        })
        .parse_all()?;
        Ok(RowTemplate { skeleton, vars })
    }

    /// A template that ignores `n`.
    pub fn fixed(f: &Formula) -> Self {
        let mut positions = Vec::new();
        collect_in_order(f, &mut positions);
        RowTemplate {
            skeleton: renumber(f, &mut 0),
            vars: positions.into_iter().map(|add| Affine { mul: 0, add }).collect(),
        }
    }

    /// Row `n` of the template.
    pub fn instantiate(&self, n: u64) -> Result<Formula> {
        self.skeleton.try_map_vars(&|i| {
            self.vars[i as usize]
                .at(n)
                .ok_or_else(|| Error::InvalidInput(format!("template position overflows at row {n}")))
        })
    }

    pub fn affine_vars(&self) -> &[Affine] {
        &self.vars
    }
}

fn collect_in_order(f: &Formula, out: &mut Vec<u64>) {
    match f {
        Formula::Var { pos } => out.push(*pos),
        Formula::Const { .. } => {}
        Formula::Not { child } => collect_in_order(child, out),
        Formula::And { children } | Formula::Or { children } | Formula::Xor { children } => {
            children.iter().for_each(|c| collect_in_order(c, out))
        }
    }
}

fn renumber(f: &Formula, next: &mut u64) -> Formula {
    match f {
        Formula::Var { .. } => {
            let v = Formula::var(*next);
            *next += 1;
            v
        }
        Formula::Const { .. } => f.clone(),
        Formula::Not { child } => Formula::not(renumber(child, next)),
        Formula::And { children } => Formula::and(children.iter().map(|c| renumber(c, next)).collect()),
        Formula::Or { children } => Formula::or(children.iter().map(|c| renumber(c, next)).collect()),
        Formula::Xor { children } => Formula::xor(children.iter().map(|c| renumber(c, next)).collect()),
    }
}

impl fmt::Display for RowTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.skeleton
            .write_with(f, &|i, f| write!(f, "{}", self.vars[i as usize]))
    }
}

impl FromStr for RowTemplate {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        RowTemplate::parse(s)
    }
}

impl TryFrom<String> for RowTemplate {
    type Error = ParseError;

    fn try_from(s: String) -> Result<Self, ParseError> {
        RowTemplate::parse(&s)
    }
}

impl From<RowTemplate> for String {
    fn from(t: RowTemplate) -> String {
        t.to_string()
    }
}
