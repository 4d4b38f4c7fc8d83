//! Numerical kernels shared by the comparators and generators.
//!
//! All kernels are pure functions; identical inputs give bit-identical outputs.

pub mod gamma_dist;
pub mod ode;
pub mod optimize;
pub mod quadrature;
pub mod special;
pub mod student_t;

pub use gamma_dist::GammaParams;
pub use ode::{downsample, rk4_integrate, rk4_sampled, OdeState};
pub use optimize::maximize_scalar;
pub use quadrature::{integrate, LogIntegral, QuadratureMethod, QuadratureSpec};
pub use special::{digamma, ln_gamma, log_bessel_i0, trigamma};
pub use student_t::{student_t_cdf, student_t_quantile};

use crate::error::{domain, Result};

/// `ln Σ exp(t)` with a max shift. `-inf` terms contribute nothing.
pub fn log_sum_exp(terms: &[f64]) -> Result<f64> {
    if terms.is_empty() {
        return domain("log_sum_exp of an empty list");
    }
    Ok(lse_iter(terms.iter().copied()))
}

/// Infallible variant for internal callers; `-inf` for an empty iterator.
pub(crate) fn lse_iter<I>(terms: I) -> f64
where
    I: Iterator<Item = f64> + Clone,
{
    let max = terms.clone().fold(f64::NEG_INFINITY, f64::max);
    if max.is_infinite() || max.is_nan() {
        return max;
    }
    max + terms.map(|t| (t - max).exp()).sum::<f64>().ln()
}

/// `ln(e^a + e^b)`.
pub(crate) fn lse2(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi.is_infinite() {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `ln|e^a - e^b|`.
pub(crate) fn log_abs_diff(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if lo == hi {
        return f64::NEG_INFINITY;
    }
    hi + (-(lo - hi).exp_m1()).ln()
}
