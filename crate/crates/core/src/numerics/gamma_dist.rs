//! Gamma distribution in the shape/rate parameterization.

use serde::{Deserialize, Serialize};

use super::special::{gamma_reg_pair, ln_gamma_unchecked, newton_bisect};
use crate::error::{domain, Result};

/// Gamma distribution with density `β^α x^(α-1) e^(-βx) / Γ(α)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaParams {
    pub shape: f64,
    pub rate: f64,
}

impl GammaParams {
    pub fn new(shape: f64, rate: f64) -> Result<Self> {
        if !(shape > 0.0 && rate > 0.0) || !shape.is_finite() || !rate.is_finite() {
            return domain(format!("gamma shape and rate must be positive, got ({shape}, {rate})"));
        }
        Ok(Self { shape, rate })
    }

    pub fn mean(&self) -> f64 {
        self.shape / self.rate
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return f64::NEG_INFINITY;
        }
        self.shape * self.rate.ln() + (self.shape - 1.0) * x.ln() - self.rate * x - ln_gamma_unchecked(self.shape)
    }

    /// `(P(X <= x), P(X > x))`, each without cancellation.
    pub fn tails(&self, x: f64) -> (f64, f64) {
        gamma_reg_pair(self.shape, self.rate * x)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.tails(x).0
    }

    /// Quantile from both tail masses; uses the smaller one for precision.
    pub fn quantile_from_tails(&self, lower: f64, upper: f64) -> f64 {
        if lower <= 0.0 {
            return 0.0;
        }
        if upper <= 0.0 {
            return f64::INFINITY;
        }
        let use_lower = lower <= upper;
        // f is increasing in x on both branches
        let f = |x: f64| {
            let (p, q) = self.tails(x);
            let v = if use_lower { p - lower } else { upper - q };
            (v, self.ln_pdf(x).exp())
        };
        let mut hi = self.mean().max(f64::MIN_POSITIVE);
        while f(hi).0 < 0.0 {
            hi *= 2.0;
            if !hi.is_finite() {
                return f64::MAX;
            }
        }
        let mut lo = hi;
        while lo > f64::MIN_POSITIVE && f(lo).0 > 0.0 {
            lo *= 0.5;
        }
        newton_bisect(f, lo, hi, 0.5 * (lo + hi), 1e-15)
    }

    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return domain(format!("quantile needs p in (0, 1), got {p}"));
        }
        Ok(self.quantile_from_tails(p, 1.0 - p))
    }
}
