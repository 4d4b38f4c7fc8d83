//! Gamma margins joined by a Student-t copula, fitted by inference functions
//! for margins (IFM): margins first, then the copula correlation on the
//! pseudo-observations.

use serde::{Deserialize, Serialize};

use super::Comparator;
use crate::data::PairedDataset;
use crate::error::{domain, Error, Result};
use crate::measure::LogBayesFactor;
use crate::numerics::gamma_dist::GammaParams;
use crate::numerics::optimize::maximize_scalar;
use crate::numerics::special::{digamma_unchecked, ln_gamma_unchecked, newton_bisect, trigamma_unchecked};
use crate::numerics::student_t;

/// Degrees of freedom of the copula; fixed, not estimated.
pub const COPULA_NU: f64 = 5.0;
/// Search bracket for the copula correlation.
pub const RHO_BOUND: f64 = 0.99;
const RHO_TOL: f64 = 1e-7;
const MIN_SAMPLES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CopulaFit {
    pub marginal_x: GammaParams,
    pub marginal_y: GammaParams,
    pub rho_hat: f64,
    pub nu: f64,
    /// Plug-in copula information: mean log copula density at `rho_hat`.
    pub ihat: f64,
    /// True when `rho_hat` sits on the edge of `[-0.99, 0.99]`.
    pub rho_at_boundary: bool,
}

/// Log density of the bivariate t copula, given the t quantiles `s`, `w` of
/// the pseudo-observations.
pub fn t_copula_ln_density(s: f64, w: f64, rho: f64, nu: f64) -> f64 {
    let one_m = 1.0 - rho * rho;
    let q = (s * s - 2.0 * rho * s * w + w * w) / (nu * one_m);
    let ln_joint = ln_gamma_unchecked(0.5 * (nu + 2.0))
        - ln_gamma_unchecked(0.5 * nu)
        - (nu * std::f64::consts::PI).ln()
        - 0.5 * one_m.ln()
        - 0.5 * (nu + 2.0) * q.ln_1p();
    ln_joint - student_t::ln_pdf(s, nu) - student_t::ln_pdf(w, nu)
}

/// Gamma maximum-likelihood fit in shape/rate form.
///
/// The shape solves `ln α - ψ(α) = ln x̄ - mean(ln x)`; the left side is
/// decreasing with `1/(2α) < ln α - ψ(α) < 1/α`, which brackets the root.
/// The method-of-moments shape seeds the Newton iteration.
pub fn fit_gamma(xs: &[f64]) -> Result<GammaParams> {
    if xs.is_empty() {
        return domain("gamma fit of an empty sample");
    }
    if let Some(v) = xs.iter().find(|&&v| !(v > 0.0)) {
        return domain(format!("gamma margins need strictly positive data, got {v}"));
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let mean_ln = xs.iter().map(|v| v.ln()).sum::<f64>() / n;
    let s = mean.ln() - mean_ln;
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Fit(format!("gamma shape undefined: ln(mean) - mean(ln x) = {s:e} (all values equal?)")));
    }
    let var = xs.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let (lo, hi) = (0.5 / s, 1.0 / s);
    let start = if var > 0.0 { (mean * mean / var).clamp(lo, hi) } else { 0.5 * (lo + hi) };
    // increasing in α
    let g = |a: f64| (s - (a.ln() - digamma_unchecked(a)), trigamma_unchecked(a) - 1.0 / a);
    let shape = newton_bisect(g, lo, hi, start, 1e-14);
    let residual = g(shape).0;
    if !shape.is_finite() || residual.abs() > 1e-9 * s {
        return Err(Error::Fit(format!(
            "gamma shape equation not solved: shape {shape}, residual {residual:e}, target {s:e}"
        )));
    }
    GammaParams::new(shape, shape / mean)
}

fn t_scores(xs: &[f64], margin: &GammaParams, nu: f64) -> Vec<f64> {
    xs.iter()
        .map(|&x| {
            let (lower, upper) = margin.tails(x);
            student_t::quantile_from_tails(lower.max(f64::MIN_POSITIVE), upper.max(f64::MIN_POSITIVE), nu)
        })
        .collect()
}

/// Pseudo-observations `(F_X(x_n), F_Y(y_n))` at the fitted margins.
pub fn pseudo_observations(data: &PairedDataset, fit: &CopulaFit) -> Vec<(f64, f64)> {
    data.x_flat().iter().zip(data.y_flat()).map(|(&x, &y)| (fit.marginal_x.cdf(x), fit.marginal_y.cdf(y))).collect()
}

/// IFM fit of gamma margins and a `ν = 5` t copula.
pub fn copula_ifm_fit(data: &PairedDataset) -> Result<CopulaFit> {
    data.require_univariate("copula comparator")?;
    if data.len() < MIN_SAMPLES {
        return domain(format!("copula fit needs at least {MIN_SAMPLES} samples, got {}", data.len()));
    }
    let marginal_x = fit_gamma(data.x_flat())?;
    let marginal_y = fit_gamma(data.y_flat())?;
    let nu = COPULA_NU;
    let s = t_scores(data.x_flat(), &marginal_x, nu);
    let w = t_scores(data.y_flat(), &marginal_y, nu);
    let n = data.len() as f64;
    let mean_ln_c = |rho: f64| s.iter().zip(&w).map(|(&a, &b)| t_copula_ln_density(a, b, rho, nu)).sum::<f64>() / n;
    let (rho_hat, ihat) = maximize_scalar(mean_ln_c, -RHO_BOUND, RHO_BOUND, RHO_TOL)?;
    if !ihat.is_finite() {
        return Err(Error::Fit(format!("copula log-likelihood not finite at rho = {rho_hat}")));
    }
    Ok(CopulaFit {
        marginal_x,
        marginal_y,
        rho_hat,
        nu,
        ihat,
        rho_at_boundary: RHO_BOUND - rho_hat.abs() < 10.0 * RHO_TOL,
    })
}

/// `N·Î - ½ ln N`: one extra parameter (`ρ`) under `H1`. Approximate.
pub fn copula_lnbf(fit: &CopulaFit, n: usize) -> Result<LogBayesFactor> {
    if n < 2 {
        return domain(format!("copula comparison needs N >= 2, got {n}"));
    }
    let n = n as f64;
    LogBayesFactor::approximate(n * fit.ihat - 0.5 * n.ln())
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CopulaComparator;

impl Comparator for CopulaComparator {
    fn name(&self) -> &'static str {
        "copula"
    }

    fn dims(&self) -> (usize, usize) {
        (4, 5)
    }

    fn symmetric_xy(&self) -> bool {
        true
    }

    fn approximate(&self) -> bool {
        true
    }

    fn log_bayes_factor(&self, data: &PairedDataset) -> Result<LogBayesFactor> {
        copula_lnbf(&copula_ifm_fit(data)?, data.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quadrature::GaussLegendre;

    const TWENTY: [f64; 20] = [
        0.62, 1.35, 0.88, 2.10, 0.47, 1.02, 0.95, 1.71, 0.33, 1.18, 0.79, 1.56, 0.91, 0.58, 1.27, 2.44, 0.69, 1.09,
        0.84, 1.40,
    ];

    fn gamma_loglik(xs: &[f64], shape: f64, rate: f64) -> f64 {
        let g = GammaParams { shape, rate };
        xs.iter().map(|&x| g.ln_pdf(x)).sum()
    }

    #[test]
    fn gamma_mle_matches_grid_oracle() {
        let fit = fit_gamma(&TWENTY).unwrap();
        let (lo, hi) = (0.5, 12.5);
        let step = (hi - lo) / 400.0;
        let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
        for i in 0..=400 {
            for j in 0..=400 {
                let (a, b) = (lo + i as f64 * step, lo + j as f64 * step);
                let ll = gamma_loglik(&TWENTY, a, b);
                if ll > best.0 {
                    best = (ll, a, b);
                }
            }
        }
        assert!((fit.shape - best.1).abs() <= step, "{fit:?} vs {best:?}");
        assert!((fit.rate - best.2).abs() <= step, "{fit:?} vs {best:?}");
        assert!(gamma_loglik(&TWENTY, fit.shape, fit.rate) >= best.0);
    }

    #[test]
    fn gamma_fit_rejects_bad_samples() {
        assert!(matches!(fit_gamma(&[1.0, -2.0]), Err(Error::Domain(_))));
        assert!(matches!(fit_gamma(&[2.0, 2.0, 2.0]), Err(Error::Fit(_))));
    }

    #[test]
    fn copula_density_integrates_to_one() {
        // ∫∫ c du dv equals the bivariate t mass in t-score coordinates
        let gl = GaussLegendre::new(30);
        let nu = COPULA_NU;
        let inner = |s: f64| {
            let f = |w: f64| {
                (t_copula_ln_density(s, w, 0.6, nu) + student_t::ln_pdf(s, nu) + student_t::ln_pdf(w, nu)).exp()
            };
            (0..80).map(|k| gl.integrate(f, -200.0 + 5.0 * k as f64, -195.0 + 5.0 * k as f64)).sum::<f64>()
        };
        let total: f64 = (0..80).map(|k| gl.integrate(inner, -200.0 + 5.0 * k as f64, -195.0 + 5.0 * k as f64)).sum();
        assert!((total - 1.0).abs() < 1e-3, "{total}");
        // ρ = 0 is not independence for a t copula: c(½,½) = Γ(ν/2+1)Γ(ν/2)/Γ((ν+1)/2)²
        assert!((t_copula_ln_density(0.0, 0.0, 0.0, nu) - 0.09936211170010277).abs() < 1e-13);
    }

    #[test]
    fn copula_rho_maximizer_matches_grid_oracle() {
        let s = [0.4, -1.3, 2.2];
        let w = [0.9, -0.5, 1.4];
        let f = |rho: f64| (0..3).map(|i| t_copula_ln_density(s[i], w[i], rho, COPULA_NU)).sum::<f64>();
        let (arg, _) = maximize_scalar(f, -RHO_BOUND, RHO_BOUND, 1e-9).unwrap();
        let spacing = 2.0 * RHO_BOUND / 2000.0;
        let grid_best =
            (0..=2000).map(|i| -RHO_BOUND + i as f64 * spacing).max_by(|a, b| f(*a).total_cmp(&f(*b))).unwrap();
        assert!((arg - grid_best).abs() <= spacing, "{arg} vs {grid_best}");
    }

    fn positive_pairs() -> PairedDataset {
        let x: Vec<f64> = TWENTY.to_vec();
        let y: Vec<f64> = TWENTY.iter().enumerate().map(|(i, v)| 2.0 * v + 0.3 * ((i * 7 % 5) as f64)).collect();
        PairedDataset::univariate(x, y).unwrap()
    }

    #[test]
    fn scaling_changes_only_the_rate() {
        let d = positive_pairs();
        let scaled =
            PairedDataset::univariate(d.x_flat().iter().map(|v| 3.5 * v).collect(), d.y_flat().to_vec()).unwrap();
        let a = copula_ifm_fit(&d).unwrap();
        let b = copula_ifm_fit(&scaled).unwrap();
        assert!((a.marginal_x.shape - b.marginal_x.shape).abs() < 1e-8 * a.marginal_x.shape);
        assert!((a.marginal_x.rate / b.marginal_x.rate - 3.5).abs() < 1e-8);
        assert!((a.rho_hat - b.rho_hat).abs() < 1e-8);
        assert!((a.ihat - b.ihat).abs() < 1e-8);
        for (p, q) in pseudo_observations(&d, &a).iter().zip(pseudo_observations(&scaled, &b)) {
            assert!((p.0 - q.0).abs() < 1e-8 && (p.1 - q.1).abs() < 1e-8);
        }
    }

    #[test]
    fn comonotone_data_hit_the_upper_bound() {
        let d = PairedDataset::univariate(TWENTY.to_vec(), TWENTY.to_vec()).unwrap();
        let fit = copula_ifm_fit(&d).unwrap();
        assert!((fit.rho_hat - RHO_BOUND).abs() < 1e-6, "{}", fit.rho_hat);
        assert!(fit.rho_at_boundary);
    }

    #[test]
    fn lnbf_arithmetic() {
        let mut fit = copula_ifm_fit(&positive_pairs()).unwrap();
        fit.ihat = 0.0;
        assert!((copula_lnbf(&fit, 100).unwrap().value() + 0.5 * 100f64.ln()).abs() < 1e-14);
        fit.ihat = 0.1;
        assert!((copula_lnbf(&fit, 100).unwrap().value() - 7.697_414_907_005_954).abs() < 1e-12);
        assert!(copula_lnbf(&fit, 1).unwrap_err().is_usage());
    }

    #[test]
    fn input_validation() {
        let few = PairedDataset::univariate(vec![1.0; 4], vec![1.0; 4]).unwrap();
        assert!(copula_ifm_fit(&few).is_err());
        let neg = PairedDataset::univariate(vec![1.0, 2.0, -3.0, 4.0, 5.0], vec![1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert!(matches!(copula_ifm_fit(&neg), Err(Error::Domain(_))));
    }
}
