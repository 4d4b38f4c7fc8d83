//! Functional dependence: `(x, y) = (t, t) + (e, f)` under `H1` versus
//! `(x, y) = (u, v) + (e, f)` under `H0`, with `t, u, v ~ N(0, τ²)` and
//! `e, f ~ N(0, σ²)`. The latent variables integrate out in closed form.

use super::Comparator;
use crate::data::PairedDataset;
use crate::error::{domain, Result};
use crate::measure::LogBayesFactor;

/// Closed-form log Bayes factor, with `α² = σ²/τ²`:
///
/// `-(N/2) ln σ² - (N/2) ln(σ² + 2τ²) + N ln(σ² + τ²)
///  - Σ [(x-y)²/(2σ²(2+α²)) + (x²+y²)/(2τ²(2+α²)) - (x²+y²)/(2τ²(1+α²))]`
pub fn functional_lnbf(data: &PairedDataset, tau2: f64, sigma2: f64) -> Result<LogBayesFactor> {
    if !(tau2 > 0.0) || !tau2.is_finite() {
        return domain(format!("tau2 must be positive, got {tau2}"));
    }
    if !(sigma2 > 0.0) || !sigma2.is_finite() {
        return domain(format!("functional comparator needs sigma2 > 0, got {sigma2}"));
    }
    data.require_univariate("functional comparator")?;
    let n = data.len() as f64;
    let alpha2 = sigma2 / tau2;
    let (mut diff_ss, mut norm_ss) = (0.0, 0.0);
    for (&x, &y) in data.x_flat().iter().zip(data.y_flat()) {
        diff_ss += (x - y) * (x - y);
        norm_ss += x * x + y * y;
    }
    let constant = -0.5 * n * sigma2.ln() - 0.5 * n * (sigma2 + 2.0 * tau2).ln() + n * (sigma2 + tau2).ln();
    let quad = diff_ss / (2.0 * sigma2 * (2.0 + alpha2)) + norm_ss / (2.0 * tau2 * (2.0 + alpha2))
        - norm_ss / (2.0 * tau2 * (1.0 + alpha2));
    LogBayesFactor::new(constant - quad)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Functional {
    pub tau2: f64,
    pub sigma2: f64,
}

impl Comparator for Functional {
    fn name(&self) -> &'static str {
        "functional"
    }

    fn dims(&self) -> (usize, usize) {
        (0, 0)
    }

    fn symmetric_xy(&self) -> bool {
        true
    }

    fn approximate(&self) -> bool {
        false
    }

    fn log_bayes_factor(&self, data: &PairedDataset) -> Result<LogBayesFactor> {
        functional_lnbf(data, self.tau2, self.sigma2)
    }
}
