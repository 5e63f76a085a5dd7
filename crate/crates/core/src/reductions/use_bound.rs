use serde::{Deserialize, Serialize};

/// A computable bound `n ↦ f(n)` on oracle use.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UseBound {
    /// `mul·n + add`
    Affine { mul: u64, add: u64 },
    /// `Σ coeffs[i]·nⁱ`, saturating.
    Polynomial { coeffs: Vec<u64> },
    /// `values[n]`, with the last value repeated forever.
    Table { values: Vec<u64> },
}

impl UseBound {
    pub fn identity() -> Self {
        UseBound::Affine { mul: 1, add: 0 }
    }

    /// `f(n)`; saturates at `u64::MAX`.
    pub fn bound(&self, n: u64) -> u64 {
        match self {
            UseBound::Affine { mul, add } => mul.saturating_mul(n).saturating_add(*add),
            UseBound::Polynomial { coeffs } => coeffs
                .iter()
                .rev()
                .fold(0u64, |acc, &c| acc.saturating_mul(n).saturating_add(c)),
            UseBound::Table { values } => match values.len() {
                0 => 0,
                len => values[(n as usize).min(len - 1)],
            },
        }
    }

    /// Monotone closure `g(n) = max{f(i) : i ≤ n}`.
    pub fn closure(&self, n: u64) -> u64 {
        match self {
            // nonnegative coefficients make these nondecreasing already
            UseBound::Affine { .. } | UseBound::Polynomial { .. } => self.bound(n),
            UseBound::Table { values } => {
                let upto = (n as usize).saturating_add(1).min(values.len());
                values[..upto].iter().copied().max().unwrap_or(0)
            }
        }
    }
}
