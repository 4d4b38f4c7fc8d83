//! Gaussian and Student-t pair samplers.

use rand::Rng;
use rand_distr::{ChiSquared, Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use super::seed::rng_from_seed;
use crate::data::PairedDataset;
use crate::error::{domain, Result};

fn check_var(name: &str, v: f64) -> Result<()> {
    if !(v >= 0.0) || !v.is_finite() {
        return domain(format!("{name} must be non-negative and finite, got {v}"));
    }
    Ok(())
}

fn normal(var: f64) -> Normal<f64> {
    Normal::new(0.0, var.sqrt()).expect("variance checked by caller")
}

/// `(u, v) = (x, y) + (e, f)` with `(x, y) ~ N(0, τ² [[1, ρ], [ρ, 1]])` and
/// `e, f ~ N(0, σ²)`.
pub fn gen_noisy_normal(rho: f64, tau2: f64, sigma2: f64, n: usize, seed: u64) -> Result<PairedDataset> {
    if !(rho.abs() <= 1.0) {
        return domain(format!("correlation must satisfy |rho| <= 1, got {rho}"));
    }
    check_var("tau2", tau2)?;
    check_var("sigma2", sigma2)?;
    let mut rng = rng_from_seed(seed);
    let (signal, noise) = (normal(tau2), normal(sigma2));
    let c = (1.0 - rho * rho).sqrt();
    let (mut us, mut vs) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for _ in 0..n {
        let a: f64 = signal.sample(&mut rng);
        let b: f64 = signal.sample(&mut rng);
        let x = a;
        let y = rho * a + c * b;
        us.push(x + noise.sample(&mut rng));
        vs.push(y + noise.sample(&mut rng));
    }
    PairedDataset::univariate(us, vs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionalModel {
    /// `(x, y) = (u, v) + (e, f)`, independent latents.
    H0,
    /// `(x, y) = (t, t) + (e, f)`, one shared latent.
    H1,
}

/// Functional-dependence data with latent variance `τ²` and noise variance `σ²`.
pub fn gen_functional(model: FunctionalModel, tau2: f64, sigma2: f64, n: usize, seed: u64) -> Result<PairedDataset> {
    check_var("tau2", tau2)?;
    check_var("sigma2", sigma2)?;
    let mut rng = rng_from_seed(seed);
    let (latent, noise) = (normal(tau2), normal(sigma2));
    let (mut xs, mut ys) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for _ in 0..n {
        let (a, b) = match model {
            FunctionalModel::H1 => {
                let t: f64 = latent.sample(&mut rng);
                (t, t)
            }
            FunctionalModel::H0 => (latent.sample(&mut rng), latent.sample(&mut rng)),
        };
        xs.push(a + noise.sample(&mut rng));
        ys.push(b + noise.sample(&mut rng));
    }
    PairedDataset::univariate(xs, ys)
}

/// Standard bivariate t pair: a correlated normal pair divided by `sqrt(W/ν)`
/// with `W ~ χ²_ν`.
pub(crate) fn bivariate_t_pair<R: Rng + ?Sized>(rng: &mut R, rho: f64, chi: &ChiSquared<f64>, nu: f64) -> (f64, f64) {
    let z1: f64 = StandardNormal.sample(rng);
    let z2: f64 = StandardNormal.sample(rng);
    let scale = (chi.sample(rng) / nu).sqrt();
    (z1 / scale, (rho * z1 + (1.0 - rho * rho).sqrt() * z2) / scale)
}

fn chi_squared(nu: f64) -> Result<ChiSquared<f64>> {
    ChiSquared::new(nu).map_err(|e| crate::error::Error::Domain(format!("degrees of freedom {nu}: {e}")))
}

fn unit_variance_scale(nu: f64) -> Result<f64> {
    if !(nu > 2.0) || !nu.is_finite() {
        return domain(format!("unit-variance t samples need nu > 2, got {nu}"));
    }
    Ok(((nu - 2.0) / nu).sqrt())
}

/// Bivariate t with correlation `ρ` and `ν` degrees of freedom, rescaled to
/// unit marginal variance. Heavy-tailed and outside both Gaussian hypotheses.
pub fn gen_bivariate_t(rho: f64, nu: f64, n: usize, seed: u64) -> Result<PairedDataset> {
    if !(rho.abs() < 1.0) {
        return domain(format!("correlation must satisfy |rho| < 1, got {rho}"));
    }
    let k = unit_variance_scale(nu)?;
    let chi = chi_squared(nu)?;
    let mut rng = rng_from_seed(seed);
    let (xs, ys): (Vec<f64>, Vec<f64>) = (0..n)
        .map(|_| {
            let (s, w) = bivariate_t_pair(&mut rng, rho, &chi, nu);
            (k * s, k * w)
        })
        .unzip();
    PairedDataset::univariate(xs, ys)
}

/// Two independent univariate t samples, each rescaled to unit variance.
pub fn gen_independent_t(nu: f64, n: usize, seed: u64) -> Result<PairedDataset> {
    let k = unit_variance_scale(nu)?;
    let t = rand_distr::StudentT::new(nu)
        .map_err(|e| crate::error::Error::Domain(format!("degrees of freedom {nu}: {e}")))?;
    let mut rng = rng_from_seed(seed);
    let (xs, ys): (Vec<f64>, Vec<f64>) = (0..n).map(|_| (k * t.sample(&mut rng), k * t.sample(&mut rng))).unzip();
    PairedDataset::univariate(xs, ys)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_correlation_without_noise_duplicates_columns() {
        let d = gen_noisy_normal(1.0, 1.0, 0.0, 50, 3).unwrap();
        assert_eq!(d.x_flat(), d.y_flat());
    }

    #[test]
    fn independent_noisy_normal_is_uncorrelated() {
        let d = gen_noisy_normal(0.0, 1.0, 0.5, 100_000, 4).unwrap();
        assert!(d.sample_correlation().abs() < 0.01);
    }

    #[test]
    fn determinism() {
        assert_eq!(gen_noisy_normal(0.3, 1.0, 0.1, 20, 9).unwrap(), gen_noisy_normal(0.3, 1.0, 0.1, 20, 9).unwrap());
        assert_ne!(gen_noisy_normal(0.3, 1.0, 0.1, 20, 9).unwrap(), gen_noisy_normal(0.3, 1.0, 0.1, 20, 10).unwrap());
        assert!(gen_noisy_normal(1.1, 1.0, 0.1, 20, 9).is_err());
    }

    #[test]
    fn functional_models() {
        let h1 = gen_functional(FunctionalModel::H1, 1.0, 0.0, 30, 5).unwrap();
        assert_eq!(h1.x_flat(), h1.y_flat());
        let h0 = gen_functional(FunctionalModel::H0, 1.0, 1.0, 100_000, 6).unwrap();
        assert!(h0.sample_correlation().abs() < 0.01);
        // corr = τ²/(τ² + σ²)
        let h1 = gen_functional(FunctionalModel::H1, 1.0, 1.0, 100_000, 7).unwrap();
        assert!((h1.sample_correlation() - 0.5).abs() < 0.02);
    }

    #[test]
    fn t_samples_have_unit_variance() {
        let d = gen_independent_t(5.0, 200_000, 8).unwrap();
        let var = d.x_flat().iter().map(|v| v * v).sum::<f64>() / d.len() as f64;
        assert!((var - 1.0).abs() < 0.05, "{var}");
        assert!(d.sample_correlation().abs() < 0.01);
        let b = gen_bivariate_t(0.6, 5.0, 200_000, 9).unwrap();
        assert!((b.sample_correlation() - 0.6).abs() < 0.02);
        assert!(gen_independent_t(2.0, 10, 1).is_err());
    }
}
