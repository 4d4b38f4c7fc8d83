//! Gamma-margin pairs joined by a Student-t or product copula.

use rand_distr::{ChiSquared, Distribution, Uniform};
use serde::{Deserialize, Serialize};

use super::gaussian::bivariate_t_pair;
use super::seed::rng_from_seed;
use crate::data::PairedDataset;
use crate::error::{domain, Result};
use crate::numerics::gamma_dist::GammaParams;
use crate::numerics::student_t;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaMargins {
    pub x: GammaParams,
    pub y: GammaParams,
}

impl Default for GammaMargins {
    /// Shape/rate `(4, 4)` for `x` and `(10, 5)` for `y`.
    fn default() -> Self {
        Self { x: GammaParams { shape: 4.0, rate: 4.0 }, y: GammaParams { shape: 10.0, rate: 5.0 } }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CopulaMode {
    /// Student-t copula with correlation `rho` and `nu` degrees of freedom.
    StudentT { rho: f64, nu: f64 },
    /// Independent margins.
    Product,
}

/// Draws `(s, w)` from the copula's generating distribution, maps them to
/// uniforms through the t CDF and then to the gamma margins. Tail masses are
/// carried separately so extreme draws keep their precision.
pub fn gen_gamma_tcopula(mode: CopulaMode, margins: &GammaMargins, n: usize, seed: u64) -> Result<PairedDataset> {
    let mut rng = rng_from_seed(seed);
    let (mut xs, mut ys) = (Vec::with_capacity(n), Vec::with_capacity(n));
    match mode {
        CopulaMode::StudentT { rho, nu } => {
            if !(rho.abs() < 1.0) {
                return domain(format!("copula correlation must satisfy |rho| < 1, got {rho}"));
            }
            let chi = ChiSquared::new(nu)
                .map_err(|e| crate::error::Error::Domain(format!("degrees of freedom {nu}: {e}")))?;
            for _ in 0..n {
                let (s, w) = bivariate_t_pair(&mut rng, rho, &chi, nu);
                let (su, sl) = student_t::tails(s, nu);
                let (wu, wl) = student_t::tails(w, nu);
                xs.push(margins.x.quantile_from_tails(su, sl));
                ys.push(margins.y.quantile_from_tails(wu, wl));
            }
        }
        CopulaMode::Product => {
            let unit = Uniform::new(0.0f64, 1.0).expect("valid range");
            for _ in 0..n {
                let u: f64 = unit.sample(&mut rng);
                let v: f64 = unit.sample(&mut rng);
                xs.push(margins.x.quantile_from_tails(u, 1.0 - u));
                ys.push(margins.y.quantile_from_tails(v, 1.0 - v));
            }
        }
    }
    // quantiles of a zero lower tail are 0; nudge to keep gamma support
    for v in xs.iter_mut().chain(ys.iter_mut()) {
        if *v <= 0.0 {
            *v = f64::MIN_POSITIVE;
        }
    }
    PairedDataset::univariate(xs, ys)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Kendall's tau for continuous data: sort by x, count y-inversions by merge sort.
    fn kendall_tau(d: &PairedDataset) -> f64 {
        let mut pairs: Vec<(f64, f64)> = d.x_flat().iter().copied().zip(d.y_flat().iter().copied()).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        fn inversions(v: &mut [f64], buf: &mut Vec<f64>) -> u64 {
            let n = v.len();
            if n < 2 {
                return 0;
            }
            let mid = n / 2;
            let mut count = inversions(&mut v[..mid], buf) + inversions(&mut v[mid..], buf);
            buf.clear();
            let (mut i, mut j) = (0, mid);
            while i < mid && j < n {
                if v[i] <= v[j] {
                    buf.push(v[i]);
                    i += 1;
                } else {
                    buf.push(v[j]);
                    count += (mid - i) as u64;
                    j += 1;
                }
            }
            buf.extend_from_slice(&v[i..mid]);
            buf.extend_from_slice(&v[j..n]);
            v.copy_from_slice(buf);
            count
        }
        let n = ys.len() as f64;
        let inv = inversions(&mut ys, &mut Vec::new()) as f64;
        1.0 - 4.0 * inv / (n * (n - 1.0))
    }

    #[test]
    fn product_copula_has_no_concordance() {
        let d = gen_gamma_tcopula(CopulaMode::Product, &GammaMargins::default(), 100_000, 1).unwrap();
        assert!(kendall_tau(&d).abs() < 0.01);
    }

    #[test]
    fn t_copula_tau_follows_the_elliptical_relation() {
        let d = gen_gamma_tcopula(CopulaMode::StudentT { rho: 0.7, nu: 5.0 }, &GammaMargins::default(), 100_000, 2)
            .unwrap();
        let expect = 2.0 / std::f64::consts::PI * 0.7f64.asin();
        assert!((kendall_tau(&d) - expect).abs() < 0.02);
    }

    #[test]
    fn margin_means() {
        let d = gen_gamma_tcopula(CopulaMode::StudentT { rho: 0.2, nu: 5.0 }, &GammaMargins::default(), 100_000, 3)
            .unwrap();
        let mx = d.x_flat().iter().sum::<f64>() / d.len() as f64;
        let my = d.y_flat().iter().sum::<f64>() / d.len() as f64;
        assert!((mx - 1.0).abs() < 0.02, "{mx}");
        assert!((my - 2.0).abs() < 0.02, "{my}");
        assert!(d.x_flat().iter().all(|&v| v > 0.0));
    }

    #[test]
    fn kendall_tau_oracle_on_small_cases() {
        let d = PairedDataset::univariate(vec![1.0, 2.0, 3.0], vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(kendall_tau(&d), 1.0);
        let d = PairedDataset::univariate(vec![1.0, 2.0, 3.0], vec![3.0, 2.0, 1.0]).unwrap();
        assert_eq!(kendall_tau(&d), -1.0);
    }

    #[test]
    fn rejects_unit_correlation() {
        assert!(gen_gamma_tcopula(CopulaMode::StudentT { rho: 1.0, nu: 5.0 }, &GammaMargins::default(), 10, 1).is_err());
    }
}
