//! The lower exponent-p central filtration `γ^p_n` of a free group.
//!
//! Everything is computed inside the truncated Magnus algebra: the image of
//! `F` there is a finite p-group `Ḡ`, and for a suitable truncation degree
//! the image of `γ^p_n(F)` has full preimage `γ^p_n(F)`, so membership is
//! decided exactly in `Ḡ`.

mod enumerate;
mod oracle;
mod pcgs;
mod quotient;
mod series;
mod theta;

pub use enumerate::{enumerate_image_group, verbal_lambda_step, EnumeratedSubgroup};
pub use oracle::{build_lambda_oracle, LambdaOracle};
pub use pcgs::{BaseElement, PcSubgroup, SiftResult};
pub use quotient::{perm_order, sigma_n, theta_j, InducedAut, LayerQuotient, QuotientGroup};
pub use series::{MagnusContext, Substitution, TruncatedSeries, SUPPORTED_PRIMES};
pub use theta::{matrix_group_order, theta1, FpMatrix};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Resource limits. Exceeding one is reported as [`Error::CapExceeded`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest explicitly enumerated set (quotient groups, orbits, BFS).
    pub element_cap: usize,
    /// Largest number of monomials in a truncated algebra.
    pub monomial_cap: usize,
    /// Largest permutation degree of an emitted certificate.
    pub order_cap: usize,
    /// Deepest filtration level; `None` uses the per-prime default.
    pub depth_cap: Option<usize>,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { element_cap: 1 << 20, monomial_cap: 1 << 20, order_cap: 1_000_000, depth_cap: None }
    }
}

impl Caps {
    pub fn depth_cap_for(&self, p: u32) -> usize {
        self.depth_cap.unwrap_or(match p {
            2 | 3 => 4,
            _ => 3,
        })
    }

    pub(crate) fn check_depth(&self, p: u32, n: usize) -> Result<()> {
        let cap = self.depth_cap_for(p);
        if n > cap {
            return Err(Error::CapExceeded { cap: "depth", limit: cap });
        }
        Ok(())
    }
}

/// Truncation degree at which level `n` is exact:
/// `max { i·p^k : i ≥ 1, k ≥ 0, i + k ≤ n − 1 }` (at least 1).
///
/// The mod-p dimension subgroup `D_{d+1}` is generated by the `γ_i^{p^k}`
/// with `i·p^k ≥ d+1`, while `γ^p_n` contains every `γ_i^{p^k}` with
/// `i + k ≥ n`; with this `d` the first family lies inside the second.
pub fn truncation_degree(p: u32, n: usize) -> usize {
    let mut best = 1usize;
    for k in 0..n.saturating_sub(1) {
        let i = n - 1 - k;
        let v = i.saturating_mul((p as usize).saturating_pow(k as u32));
        best = best.max(v);
    }
    best
}
