//! Student-t distribution functions.

use std::f64::consts::PI;

use super::special::{beta_reg_pair, ln_gamma_unchecked, newton_bisect};
use crate::error::{domain, Result};

fn check_nu(nu: f64) -> Result<()> {
    if !(nu > 0.0) || !nu.is_finite() {
        return domain(format!("degrees of freedom must be positive and finite, got {nu}"));
    }
    Ok(())
}

/// Log density of the standard Student-t with `nu` degrees of freedom.
pub fn student_t_ln_pdf(x: f64, nu: f64) -> Result<f64> {
    check_nu(nu)?;
    Ok(ln_pdf(x, nu))
}

pub(crate) fn ln_pdf(x: f64, nu: f64) -> f64 {
    ln_gamma_unchecked(0.5 * (nu + 1.0))
        - ln_gamma_unchecked(0.5 * nu)
        - 0.5 * (nu * PI).ln()
        - 0.5 * (nu + 1.0) * (x * x / nu).ln_1p()
}

/// Upper tail `P(T > t)` for `t >= 0`, with full relative precision.
fn upper_tail(t: f64, nu: f64) -> f64 {
    if t == f64::INFINITY {
        return 0.0;
    }
    let t2 = t * t;
    let (x, y) = (nu / (nu + t2), t2 / (nu + t2));
    0.5 * beta_reg_pair(0.5 * nu, 0.5, x, y).0
}

/// Cumulative distribution function.
pub fn student_t_cdf(x: f64, nu: f64) -> Result<f64> {
    check_nu(nu)?;
    if x.is_nan() {
        return domain("student_t_cdf of NaN");
    }
    Ok(cdf(x, nu))
}

pub(crate) fn cdf(x: f64, nu: f64) -> f64 {
    if x >= 0.0 {
        1.0 - upper_tail(x, nu)
    } else {
        upper_tail(-x, nu)
    }
}

/// Lower and upper tail probabilities `(P(T <= x), P(T > x))`, each computed
/// without cancellation.
pub(crate) fn tails(x: f64, nu: f64) -> (f64, f64) {
    if x >= 0.0 {
        let u = upper_tail(x, nu);
        (1.0 - u, u)
    } else {
        let l = upper_tail(-x, nu);
        (l, 1.0 - l)
    }
}

/// Inverse of [`student_t_cdf`] for `p` in `(0, 1)`.
pub fn student_t_quantile(p: f64, nu: f64) -> Result<f64> {
    check_nu(nu)?;
    if !(p > 0.0 && p < 1.0) {
        return domain(format!("quantile needs p in (0, 1), got {p}"));
    }
    Ok(quantile_from_tails(p, 1.0 - p, nu))
}

/// Quantile given both tail masses, so that a tiny upper tail (a lower-tail
/// probability near 1) keeps its precision.
pub(crate) fn quantile_from_tails(lower: f64, upper: f64, nu: f64) -> f64 {
    let (tail, sign) = if lower <= upper { (lower, -1.0) } else { (upper, 1.0) };
    if tail >= 0.5 {
        return 0.0;
    }
    let tail = tail.max(f64::MIN_POSITIVE);
    let mut hi = 1.0;
    while upper_tail(hi, nu) > tail {
        hi *= 2.0;
        if !hi.is_finite() {
            return sign * f64::MAX;
        }
    }
    let lo = if hi > 1.0 { 0.5 * hi } else { 0.0 };
    let t = newton_bisect(
        |t| {
            let f = tail - upper_tail(t, nu);
            (f, ln_pdf(t, nu).exp())
        },
        lo,
        hi,
        0.5 * (lo + hi),
        1e-15,
    );
    sign * t
}
