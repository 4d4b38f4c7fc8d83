//! Bivariate normal signal observed through independent Gaussian noise.
//!
//! Under `H1` the signal `(x, y)` is `N(0, τ² M(ρ))` with `M(ρ) = [[1, ρ], [ρ, 1]]`
//! and `ρ` drawn from the prior `q_ε`, uniform on `[-1, -ε] ∪ [ε, 1]`. Under
//! `H0` the signal is `N(0, τ² I)`. Both add `N(0, σ² I)` noise. The
//! observation covariance `σ² I + τ² M(ρ)` has eigenvalues `a ± b` with
//! `a = σ² + τ²`, `b = τ² ρ` along `(1, ±1)/√2`, which gives
//!
//! `ln p(D|ρ) = -N ln 2π - (N/2) ln((a-b)(a+b)) - ¼ [D₋/(a-b) + D₊/(a+b)]`
//!
//! with `D₋ = Σ(u-v)²` and `D₊ = Σ(u+v)²`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::Comparator;
use crate::data::PairedDataset;
use crate::error::{domain, Result};
use crate::measure::LogBayesFactor;
use crate::numerics::lse2;
use crate::numerics::quadrature::{integrate, QuadratureSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoisyNormalParams {
    pub tau2: f64,
    pub sigma2: f64,
    #[serde(default)]
    pub eps: f64,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
}

impl NoisyNormalParams {
    pub fn new(tau2: f64, sigma2: f64, eps: f64) -> Result<Self> {
        let p = Self { tau2, sigma2, eps, quadrature: QuadratureSpec::default() };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau2 > 0.0) || !self.tau2.is_finite() {
            return domain(format!("tau2 must be positive, got {}", self.tau2));
        }
        if !(self.sigma2 >= 0.0) || !self.sigma2.is_finite() {
            return domain(format!("sigma2 must be non-negative, got {}", self.sigma2));
        }
        if !(0.0..1.0).contains(&self.eps) {
            return domain(format!("eps must lie in [0, 1), got {}", self.eps));
        }
        self.quadrature.validate()
    }
}

/// Sufficient statistics `S = Σ z zᵀ` of the pairs `z = (u, v)`.
///
/// `diff_ss = Σ(u-v)²` and `sum_ss = Σ(u+v)²` are accumulated directly rather
/// than derived from `S`, so they keep full precision when `u ≈ ±v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterMatrix {
    pub s11: f64,
    pub s12: f64,
    pub s22: f64,
    pub diff_ss: f64,
    pub sum_ss: f64,
    pub n: usize,
}

impl ScatterMatrix {
    pub fn from_dataset(data: &PairedDataset) -> Result<Self> {
        data.require_univariate("noisy-normal comparator")?;
        let mut s = Self { s11: 0.0, s12: 0.0, s22: 0.0, diff_ss: 0.0, sum_ss: 0.0, n: data.len() };
        for (&u, &v) in data.x_flat().iter().zip(data.y_flat()) {
            s.s11 += u * u;
            s.s12 += u * v;
            s.s22 += v * v;
            s.diff_ss += (u - v) * (u - v);
            s.sum_ss += (u + v) * (u + v);
        }
        Ok(s)
    }

    pub fn trace(&self) -> f64 {
        self.s11 + self.s22
    }
}

fn ln_lik_h0(s: &ScatterMatrix, a: f64) -> f64 {
    let n = s.n as f64;
    -n * (2.0 * PI).ln() - n * a.ln() - s.trace() / (2.0 * a)
}

/// `ln p(D|ρ)` given the two covariance eigenvalues directly, so that `a - b`
/// near zero is not formed by cancellation.
fn ln_lik_eigen(s: &ScatterMatrix, lam_minus: f64, lam_plus: f64) -> f64 {
    let n = s.n as f64;
    if lam_minus <= 0.0 || lam_plus <= 0.0 {
        return f64::NEG_INFINITY;
    }
    -n * (2.0 * PI).ln()
        - 0.5 * n * (lam_minus.ln() + lam_plus.ln())
        - 0.25 * (s.diff_ss / lam_minus + s.sum_ss / lam_plus)
}

/// `ln p(D|ρ, H1)` for the noisy bivariate normal model.
pub fn ln_likelihood_at(s: &ScatterMatrix, rho: f64, tau2: f64, sigma2: f64) -> f64 {
    ln_lik_eigen(s, sigma2 + tau2 * (1.0 - rho), sigma2 + tau2 * (1.0 + rho))
}

/// `ln p(D|H1) - ln p(D|H0)`.
///
/// Each half of the prior support is integrated separately with the
/// substitution `|ρ| = 1 - w²`, which resolves the peak of the likelihood near
/// `|ρ| = 1` when `σ²` is small. With `σ² = 0` and data lying exactly on
/// `u = ±v`, the likelihood is unbounded at `ρ = ±1`; for `N >= 2` the
/// integral diverges and `+inf` is returned.
pub fn noisy_normal_lnbf(data: &PairedDataset, params: &NoisyNormalParams) -> Result<LogBayesFactor> {
    params.validate()?;
    let s = ScatterMatrix::from_dataset(data)?;
    if s.n == 0 {
        return LogBayesFactor::new(0.0);
    }
    let (tau2, sigma2) = (params.tau2, params.sigma2);
    if sigma2 == 0.0 && s.n >= 2 && (s.diff_ss == 0.0 || s.sum_ss == 0.0) {
        return LogBayesFactor::new(f64::INFINITY);
    }
    let ll0 = ln_lik_h0(&s, sigma2 + tau2);
    let ln_prior = -(2.0 * (1.0 - params.eps)).ln();
    let w_max = (1.0 - params.eps).sqrt();
    // sign = +1 covers ρ ∈ [ε, 1], sign = -1 covers ρ ∈ [-1, -ε]
    let half = |sign: f64| {
        let log_f = move |w: f64| {
            if w <= 0.0 {
                return f64::NEG_INFINITY;
            }
            let w2 = w * w;
            let near = sigma2 + tau2 * w2; // eigenvalue that vanishes as |ρ| → 1
            let far = sigma2 + tau2 * (2.0 - w2);
            let (lam_minus, lam_plus) = if sign > 0.0 { (near, far) } else { (far, near) };
            ln_lik_eigen(&s, lam_minus, lam_plus) - ll0 + ln_prior + (2.0 * w).ln()
        };
        integrate(log_f, 0.0, w_max, &params.quadrature)
    };
    let pos = half(1.0)?;
    let neg = half(-1.0)?;
    LogBayesFactor::new(lse2(pos.log_value, neg.log_value))
}

/// [`noisy_normal_lnbf`] as a [`Comparator`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoisyNormal(pub NoisyNormalParams);

impl Comparator for NoisyNormal {
    fn name(&self) -> &'static str {
        "noisy-normal"
    }

    fn dims(&self) -> (usize, usize) {
        (0, 1)
    }

    fn symmetric_xy(&self) -> bool {
        true
    }

    fn approximate(&self) -> bool {
        false
    }

    fn log_bayes_factor(&self, data: &PairedDataset) -> Result<LogBayesFactor> {
        noisy_normal_lnbf(data, &self.0)
    }
}
