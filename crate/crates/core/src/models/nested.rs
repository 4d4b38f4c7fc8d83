//! Laplace/BIC comparison of nested models.

use nalgebra::DMatrix;

use super::Comparator;
use crate::data::PairedDataset;
use crate::error::{domain, Error, Result};
use crate::measure::LogBayesFactor;

/// `(ℓ1 - ℓ0) - (D1 - D0)/2 · ln N`, flagged approximate.
///
/// A negative log-likelihood gap is accepted even though it cannot occur for
/// correctly maximized nested models.
pub fn nested_bic_lnbf(
    max_loglik_h0: f64,
    max_loglik_h1: f64,
    dim_h0: usize,
    dim_h1: usize,
    n: usize,
) -> Result<LogBayesFactor> {
    if n < 2 {
        return domain(format!("BIC comparison needs N >= 2, got {n}"));
    }
    if max_loglik_h0.is_nan() || max_loglik_h1.is_nan() {
        return domain("maximized log-likelihood is NaN");
    }
    let penalty = 0.5 * (dim_h1 as f64 - dim_h0 as f64) * (n as f64).ln();
    LogBayesFactor::approximate(max_loglik_h1 - max_loglik_h0 - penalty)
}

/// Gaussian models fitted by maximum likelihood: `H0` fits `x` and `y` as
/// independent multivariate normals, `H1` fits the joint vector.
///
/// The log-likelihood gap is `N·Î` with `Î = -½ ln(det Σ̂ / (det Σ̂x det Σ̂y))`,
/// the plug-in Gaussian mutual information.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GaussianBic;

fn gaussian_params(d: usize) -> usize {
    d + d * (d + 1) / 2
}

/// Log-determinant of the MLE covariance of the selected columns.
fn ln_det_mle_cov(columns: &[Vec<f64>]) -> Result<f64> {
    let d = columns.len();
    let n = columns[0].len() as f64;
    let means: Vec<f64> = columns.iter().map(|c| c.iter().sum::<f64>() / n).collect();
    let cov = DMatrix::from_fn(d, d, |i, j| {
        columns[i].iter().zip(&columns[j]).map(|(a, b)| (a - means[i]) * (b - means[j])).sum::<f64>() / n
    });
    let chol = cov.cholesky().ok_or_else(|| Error::Fit("sample covariance is singular".into()))?;
    Ok(2.0 * chol.l().diagonal().iter().map(|v| v.ln()).sum::<f64>())
}

impl GaussianBic {
    /// The maximized log-likelihood gap `ℓ1 - ℓ0`.
    pub fn loglik_gap(&self, data: &PairedDataset) -> Result<f64> {
        let n = data.len();
        let (dx, dy) = (data.dim_x(), data.dim_y());
        if n <= dx + dy {
            return domain(format!("Gaussian fit needs more than {} samples, got {n}", dx + dy));
        }
        let col = |flat: &[f64], d: usize, j: usize| flat.iter().skip(j).step_by(d).copied().collect::<Vec<_>>();
        let xs: Vec<Vec<f64>> = (0..dx).map(|j| col(data.x_flat(), dx, j)).collect();
        let ys: Vec<Vec<f64>> = (0..dy).map(|j| col(data.y_flat(), dy, j)).collect();
        let joint: Vec<Vec<f64>> = xs.iter().chain(&ys).cloned().collect();
        let ihat = -0.5 * (ln_det_mle_cov(&joint)? - ln_det_mle_cov(&xs)? - ln_det_mle_cov(&ys)?);
        Ok(n as f64 * ihat)
    }
}

impl Comparator for GaussianBic {
    fn name(&self) -> &'static str {
        "nested-bic"
    }

    fn dims(&self) -> (usize, usize) {
        // univariate default; log_bayes_factor uses the data's dimensions
        (4, 5)
    }

    fn symmetric_xy(&self) -> bool {
        true
    }

    fn approximate(&self) -> bool {
        true
    }

    fn log_bayes_factor(&self, data: &PairedDataset) -> Result<LogBayesFactor> {
        let (dx, dy) = (data.dim_x(), data.dim_y());
        let d0 = gaussian_params(dx) + gaussian_params(dy);
        let d1 = gaussian_params(dx + dy);
        nested_bic_lnbf(0.0, self.loglik_gap(data)?, d0, d1, data.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn formula_arithmetic() {
        let v = nested_bic_lnbf(0.0, 0.0, 1, 2, 100).unwrap();
        assert!((v.value() + 0.5 * 100f64.ln()).abs() < 1e-14);
        assert!(v.is_approximate());
        // gap 10 with two extra parameters costs ln N
        let v = nested_bic_lnbf(-5.0, 5.0, 1, 3, 7).unwrap();
        assert!((v.value() - (10.0 - 7f64.ln())).abs() < 1e-14);
        assert!(nested_bic_lnbf(0.0, 0.0, 1, 2, 1).is_err());
    }

    #[test]
    fn penalty_scales_with_ln_n() {
        let a = nested_bic_lnbf(3.0, 7.0, 2, 5, 40).unwrap().value();
        let b = nested_bic_lnbf(3.0, 7.0, 2, 5, 640).unwrap().value();
        assert!((a - b - 1.5 * 16f64.ln()).abs() < 1e-12);
    }

    fn correlated_normal(n: usize, rho: f64, seed: u64) -> PairedDataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut x, mut y) = (Vec::new(), Vec::new());
        for _ in 0..n {
            let a: f64 = StandardNormal.sample(&mut rng);
            let b: f64 = StandardNormal.sample(&mut rng);
            x.push(a);
            y.push(rho * a + (1.0 - rho * rho).sqrt() * b);
        }
        PairedDataset::univariate(x, y).unwrap()
    }

    #[test]
    fn univariate_gap_is_sample_mutual_information() {
        for (n, rho, seed) in [(50, 0.5, 1), (500, 0.0, 2), (2000, -0.8, 3)] {
            let d = correlated_normal(n, rho, seed);
            let r = d.sample_correlation();
            let expect = n as f64 * -0.5 * (1.0 - r * r).ln();
            let lnbf = GaussianBic.log_bayes_factor(&d).unwrap().value();
            assert!((lnbf - (expect - 0.5 * (n as f64).ln())).abs() < 1e-9 * expect.abs().max(1.0));
        }
    }

    #[test]
    fn multivariate_and_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let rows: Vec<(Vec<f64>, Vec<f64>)> = (0..200)
            .map(|_| {
                let z: Vec<f64> = (0..3).map(|_| StandardNormal.sample(&mut rng)).collect();
                (vec![z[0], z[1] + 0.5 * z[0]], vec![z[2] + 0.3 * z[1]])
            })
            .collect();
        let (x, y): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
        let d = PairedDataset::new(x, y).unwrap();
        let a = GaussianBic.log_bayes_factor(&d).unwrap().value();
        let b = GaussianBic.log_bayes_factor(&d.swapped()).unwrap().value();
        assert!((a - b).abs() < 1e-10);
        // dims: (2+3)+(1+1)=7 vs 3+6=9, so the penalty is ln N
        let gap = GaussianBic.loglik_gap(&d).unwrap();
        assert!((a - (gap - 200f64.ln())).abs() < 1e-12);
    }
}
