use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Orders and exponents of the norm battery.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisParams {
    /// Sobolev order of the `L^2`-based norms.
    pub m: u32,
    /// Sobolev order of the `L^q`-based norms, at least 2.
    pub m1: u32,
    /// Lebesgue exponent, `4 < q < inf`.
    pub q: f64,
    /// Decay loss `0 < eps <= 1/q`.
    pub eps: f64,
    /// Energy weight `0 < eps2 < 1/2`.
    pub eps2: f64,
    pub tau: f64,
    pub mu: f64,
    /// Derivative index `m0` of the smallness condition; defaults to
    /// `ceil((1 - 2/q)(2 + n) + 0.1)` with `n = 2`.
    pub m0: Option<u32>,
}

impl AnalysisParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.m1 < 2 {
            return bad(format!("m1 must be at least 2, got {}", self.m1));
        }
        if !(self.q > 4.0 && self.q.is_finite()) {
            return bad(format!("q must satisfy 4 < q < inf, got {}", self.q));
        }
        if !(self.eps > 0.0 && self.eps <= 1.0 / self.q + 1e-15) {
            return bad(format!("eps must lie in (0, 1/q], got {}", self.eps));
        }
        if !(self.eps2 > 0.0 && self.eps2 < 0.5) {
            return bad(format!("eps2 must lie in (0, 1/2), got {}", self.eps2));
        }
        if !(self.tau > 0.0 && self.tau <= 1.0) {
            return bad(format!("tau must lie in (0, 1], got {}", self.tau));
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return bad(format!("mu must be positive, got {}", self.mu));
        }
        Ok(())
    }

    /// Hoelder conjugate `p = q / (q - 1)`.
    pub fn p(&self) -> f64 {
        self.q / (self.q - 1.0)
    }

    pub fn m0(&self) -> u32 {
        self.m0.unwrap_or_else(|| ((1.0 - 2.0 / self.q) * 4.0 + 0.1).ceil() as u32)
    }
}

impl Default for AnalysisParams {
    fn default() -> Self {
        Self { m: 1, m1: 2, q: 8.0, eps: 0.05, eps2: 0.25, tau: 0.1, mu: 1.0, m0: None }
    }
}
