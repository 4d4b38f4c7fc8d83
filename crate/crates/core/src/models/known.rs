//! Both hypotheses fully specified: the Bayes factor is a likelihood ratio.

use std::f64::consts::PI;

use super::Comparator;
use crate::data::PairedDataset;
use crate::error::{domain, Error, Result};
use crate::measure::LogBayesFactor;

/// `Σ_n [ln f1(x_n, y_n) - ln f0x(x_n) - ln f0y(y_n)]`.
///
/// Evidence is additive: the value on a union of datasets is the sum of the
/// values on the parts.
pub fn known_dist_lnbf<F1, FX, FY>(data: &PairedDataset, f1: F1, f0x: FX, f0y: FY) -> Result<LogBayesFactor>
where
    F1: Fn(&[f64], &[f64]) -> f64,
    FX: Fn(&[f64]) -> f64,
    FY: Fn(&[f64]) -> f64,
{
    let mut total = 0.0;
    for (index, (x, y)) in data.rows().enumerate() {
        let term = f1(x, y) - f0x(x) - f0y(y);
        if term.is_nan() {
            return Err(Error::Evaluation { index });
        }
        total += term;
    }
    LogBayesFactor::new(total)
}

/// `H1`: `(x, y) ~ N(0, τ² [[1, ρ], [ρ, 1]])`; `H0`: `x, y ~ N(0, τ²)` independently.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnownGaussian {
    rho: f64,
    tau2: f64,
}

impl KnownGaussian {
    pub fn new(rho: f64, tau2: f64) -> Result<Self> {
        if !(rho.abs() < 1.0) {
            return domain(format!("known-distribution correlation must satisfy |rho| < 1, got {rho}"));
        }
        if !(tau2 > 0.0) || !tau2.is_finite() {
            return domain(format!("tau2 must be positive, got {tau2}"));
        }
        Ok(Self { rho, tau2 })
    }

    fn ln_joint(&self, x: f64, y: f64) -> f64 {
        let one_m = 1.0 - self.rho * self.rho;
        -(2.0 * PI * self.tau2).ln()
            - 0.5 * one_m.ln()
            - (x * x - 2.0 * self.rho * x * y + y * y) / (2.0 * self.tau2 * one_m)
    }

    fn ln_marginal(&self, x: f64) -> f64 {
        -0.5 * (2.0 * PI * self.tau2).ln() - x * x / (2.0 * self.tau2)
    }
}

impl Comparator for KnownGaussian {
    fn name(&self) -> &'static str {
        "known"
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
        data.require_univariate("known-distribution comparator")?;
        known_dist_lnbf(data, |x, y| self.ln_joint(x[0], y[0]), |x| self.ln_marginal(x[0]), |y| self.ln_marginal(y[0]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_dataset_gives_zero() {
        let d = PairedDataset::univariate(vec![], vec![]).unwrap();
        let k = KnownGaussian::new(0.5, 1.0).unwrap();
        assert_eq!(k.log_bayes_factor(&d).unwrap().value(), 0.0);
    }

    #[test]
    fn origin_sample() {
        let d = PairedDataset::univariate(vec![0.0], vec![0.0]).unwrap();
        for &rho in &[0.0, 0.3, -0.8] {
            let k = KnownGaussian::new(rho, 1.0).unwrap();
            let v = k.log_bayes_factor(&d).unwrap().value();
            assert!((v + 0.5 * (1.0 - rho * rho).ln()).abs() < 1e-14);
        }
        let zero = KnownGaussian::new(0.0, 1.0).unwrap().log_bayes_factor(&d).unwrap().value();
        assert_eq!(zero, 0.0);
    }

    #[test]
    fn origin_sample_by_explicit_density_evaluation() {
        // joint density at the origin is 1 / (2π sqrt(1 - ρ²)); marginals are 1/sqrt(2π)
        let rho: f64 = 0.6;
        let f1 = 1.0 / (2.0 * PI * (1.0 - rho * rho).sqrt());
        let f0 = 1.0 / (2.0 * PI).sqrt();
        let d = PairedDataset::univariate(vec![0.0], vec![0.0]).unwrap();
        let v = KnownGaussian::new(rho, 1.0).unwrap().log_bayes_factor(&d).unwrap().value();
        assert!((v - (f1 / (f0 * f0)).ln()).abs() < 1e-14);
    }

    #[test]
    fn nan_density_names_the_sample() {
        let d = PairedDataset::univariate(vec![1.0, 2.0, 3.0], vec![0.0, 0.0, 0.0]).unwrap();
        let err = known_dist_lnbf(&d, |x, _| if x[0] == 2.0 { f64::NAN } else { 0.0 }, |_| 0.0, |_| 0.0).unwrap_err();
        assert!(matches!(err, Error::Evaluation { index: 1 }));
    }

    #[test]
    fn evidence_is_additive() {
        let a = PairedDataset::univariate(vec![0.1, -1.2, 0.7], vec![0.3, -0.5, 1.1]).unwrap();
        let b = PairedDataset::univariate(vec![2.0, 0.4], vec![1.5, -0.2]).unwrap();
        let k = KnownGaussian::new(0.4, 2.0).unwrap();
        let whole = k.log_bayes_factor(&a.concat(&b).unwrap()).unwrap().value();
        let parts = k.log_bayes_factor(&a).unwrap().value() + k.log_bayes_factor(&b).unwrap().value();
        assert!((whole - parts).abs() < 1e-13);
    }
}
