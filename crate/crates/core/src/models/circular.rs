//! Uniform versus von Mises phases.
//!
//! `H0`: phases uniform on the circle. `H1`: von Mises with a uniform mean
//! direction and a concentration prior proportional to `κ (1+κ²)^{-3/2}`.
//! The mean direction integrates out analytically, leaving
//!
//! `BF = ∫₀^∞ κ (1+κ²)^{-3/2} I0(N R̄ κ) / I0(κ)^N dκ`,
//!
//! so the result depends on the sample only through `(N, R̄)`.

use serde::Serialize;

use crate::data::PhaseSample;
use crate::error::{domain, Result};
use crate::measure::{combine, DependenceMeasure, LogBayesFactor, PriorOdds};
use crate::numerics::quadrature::{integrate, QuadratureSpec};
use crate::numerics::special::log_bessel_i0_unchecked;

/// Log of the κ-integrand.
pub fn vonmises_log_integrand(kappa: f64, n: usize, rbar: f64) -> f64 {
    if kappa <= 0.0 {
        return f64::NEG_INFINITY;
    }
    kappa.ln() - 1.5 * kappa.mul_add(kappa, 1.0).ln() + log_bessel_i0_unchecked(n as f64 * rbar * kappa)
        - n as f64 * log_bessel_i0_unchecked(kappa)
}

/// `ln BF` for a sample of `n` phases with mean resultant length `rbar`.
///
/// `N = 1` forces `R̄ = 1` and the integrand reduces to the normalized prior,
/// so the value is exactly `0`. For `R̄ = 1` and `N >= 3` the integrand grows
/// like `κ^{(N-5)/2}` and the integral diverges to `+inf`.
pub fn vonmises_log_bf(n: usize, rbar: f64, quadrature: &QuadratureSpec) -> Result<LogBayesFactor> {
    if n == 0 {
        return domain("von Mises comparison needs N >= 1");
    }
    if !(0.0..=1.0).contains(&rbar) {
        return domain(format!("mean resultant length must lie in [0, 1], got {rbar}"));
    }
    if n == 1 {
        return LogBayesFactor::new(0.0);
    }
    if rbar == 1.0 && n >= 3 {
        return LogBayesFactor::new(f64::INFINITY);
    }
    let li = integrate(|k| vonmises_log_integrand(k, n, rbar), 0.0, f64::INFINITY, quadrature)?;
    LogBayesFactor::new(li.log_value)
}

/// Posterior measure from the statistics `(N, R̄)` alone.
pub fn vonmises_logr_stats(
    n: usize,
    rbar: f64,
    prior: PriorOdds,
    quadrature: &QuadratureSpec,
) -> Result<DependenceMeasure> {
    Ok(combine(prior, vonmises_log_bf(n, rbar, quadrature)?))
}

/// Posterior measure for a phase sample; read `logr()` for the base-10 log-odds.
pub fn vonmises_logr(sample: &PhaseSample, prior: PriorOdds, quadrature: &QuadratureSpec) -> Result<DependenceMeasure> {
    vonmises_logr_stats(sample.len(), sample.rbar(), prior, quadrature)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct N0Curve {
    pub rbar: f64,
    pub n_grid: Vec<usize>,
    /// `d^logr` at each grid point.
    pub values: Vec<f64>,
    /// Grid point minimizing `d^logr`; ties resolve to the smallest `N`.
    pub n0: usize,
}

/// Evaluates `d^logr` along `n_grid` at fixed `R̄` and locates its minimum.
pub fn n0_curve(rbar: f64, n_grid: &[usize], prior: PriorOdds, quadrature: &QuadratureSpec) -> Result<N0Curve> {
    if n_grid.is_empty() {
        return domain("n_grid is empty");
    }
    if n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return domain("n_grid must be strictly increasing");
    }
    let values = n_grid
        .iter()
        .map(|&n| vonmises_logr_stats(n, rbar, prior, quadrature).map(|m| m.logr()))
        .collect::<Result<Vec<_>>>()?;
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    Ok(N0Curve { rbar, n_grid: n_grid.to_vec(), values, n0: n_grid[best] })
}
