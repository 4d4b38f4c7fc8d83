use std::f64::consts::TAU;

use crate::error::{domain, Result};

/// `N` i.i.d. paired observations `(x_n, y_n)`; each side may be multivariate.
///
/// Rows are stored flat: `x` holds `n * dim_x` values, `y` holds `n * dim_y`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedDataset {
    x: Vec<f64>,
    y: Vec<f64>,
    dim_x: usize,
    dim_y: usize,
}

impl PairedDataset {
    /// Builds a dataset from row vectors. All rows on a side must share a
    /// dimension and every value must be finite.
    pub fn new(x: Vec<Vec<f64>>, y: Vec<Vec<f64>>) -> Result<Self> {
        if x.len() != y.len() {
            return domain(format!("x has {} rows but y has {}", x.len(), y.len()));
        }
        let dim_x = x.first().map_or(1, Vec::len);
        let dim_y = y.first().map_or(1, Vec::len);
        if x.iter().any(|r| r.len() != dim_x) || y.iter().any(|r| r.len() != dim_y) {
            return domain("rows of unequal dimension");
        }
        Self::from_flat(x.concat(), y.concat(), dim_x, dim_y)
    }

    /// Univariate pairs.
    pub fn univariate(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return domain(format!("x has {} values but y has {}", x.len(), y.len()));
        }
        Self::from_flat(x, y, 1, 1)
    }

    pub fn from_flat(x: Vec<f64>, y: Vec<f64>, dim_x: usize, dim_y: usize) -> Result<Self> {
        if dim_x == 0 || dim_y == 0 {
            return domain("dimensions must be at least 1");
        }
        if !x.len().is_multiple_of(dim_x) || !y.len().is_multiple_of(dim_y) || x.len() / dim_x != y.len() / dim_y {
            return domain("flat buffers do not describe the same number of rows");
        }
        if let Some(v) = x.iter().chain(&y).find(|v| !v.is_finite()) {
            return domain(format!("non-finite value {v} in dataset"));
        }
        Ok(Self { x, y, dim_x, dim_y })
    }

    pub fn len(&self) -> usize {
        self.x.len() / self.dim_x
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn dim_x(&self) -> usize {
        self.dim_x
    }

    pub fn dim_y(&self) -> usize {
        self.dim_y
    }

    pub fn x(&self, n: usize) -> &[f64] {
        &self.x[n * self.dim_x..(n + 1) * self.dim_x]
    }

    pub fn y(&self, n: usize) -> &[f64] {
        &self.y[n * self.dim_y..(n + 1) * self.dim_y]
    }

    /// Iterates over `(x_n, y_n)` row pairs.
    pub fn rows(&self) -> impl Iterator<Item = (&[f64], &[f64])> + '_ {
        self.x.chunks(self.dim_x).zip(self.y.chunks(self.dim_y))
    }

    pub fn x_flat(&self) -> &[f64] {
        &self.x
    }

    pub fn y_flat(&self) -> &[f64] {
        &self.y
    }

    pub fn is_univariate(&self) -> bool {
        self.dim_x == 1 && self.dim_y == 1
    }

    /// Errors unless both sides are one-dimensional.
    pub fn require_univariate(&self, who: &str) -> Result<()> {
        if !self.is_univariate() {
            return domain(format!("{who} needs univariate data, got dims ({}, {})", self.dim_x, self.dim_y));
        }
        Ok(())
    }

    /// The same observations with the roles of `x` and `y` exchanged.
    pub fn swapped(&self) -> Self {
        Self { x: self.y.clone(), y: self.x.clone(), dim_x: self.dim_y, dim_y: self.dim_x }
    }

    /// Concatenation of two datasets of equal dimensions.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.dim_x != other.dim_x || self.dim_y != other.dim_y {
            return domain("cannot concatenate datasets of different dimensions");
        }
        let mut x = self.x.clone();
        x.extend_from_slice(&other.x);
        let mut y = self.y.clone();
        y.extend_from_slice(&other.y);
        Self::from_flat(x, y, self.dim_x, self.dim_y)
    }

    /// Pearson correlation of the first coordinate of each side.
    pub fn sample_correlation(&self) -> f64 {
        let n = self.len() as f64;
        let xs = self.x.iter().step_by(self.dim_x);
        let ys = self.y.iter().step_by(self.dim_y);
        let (mx, my) = (xs.clone().sum::<f64>() / n, ys.clone().sum::<f64>() / n);
        let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
        for (a, b) in xs.zip(ys) {
            let (da, db) = (a - mx, b - my);
            sxx += da * da;
            syy += db * db;
            sxy += da * db;
        }
        sxy / (sxx * syy).sqrt()
    }
}

/// A sample of angles on the circle together with its mean resultant length.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSample {
    theta: Vec<f64>,
    rbar: f64,
}

impl PhaseSample {
    /// Wraps every angle into `[0, 2π)` and computes `R̄ = |Σ exp(iθ)| / N`.
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        if let Some(t) = theta.iter().find(|t| !t.is_finite()) {
            return domain(format!("non-finite phase {t}"));
        }
        let theta: Vec<f64> = theta
            .into_iter()
            .map(|t| {
                let w = t.rem_euclid(TAU);
                // rem_euclid can round up to exactly TAU
                if w >= TAU {
                    0.0
                } else {
                    w
                }
            })
            .collect();
        let rbar = mean_resultant_length(&theta);
        Ok(Self { theta, rbar })
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn rbar(&self) -> f64 {
        self.rbar
    }
}

/// Mean resultant length; `0` for an empty sample.
pub fn mean_resultant_length(theta: &[f64]) -> f64 {
    if theta.is_empty() {
        return 0.0;
    }
    let (s, c) = theta.iter().fold((0.0, 0.0), |(s, c), t| (s + t.sin(), c + t.cos()));
    (s.hypot(c) / theta.len() as f64).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_misaligned_and_non_finite() {
        assert!(PairedDataset::univariate(vec![1.0], vec![]).is_err());
        assert!(PairedDataset::univariate(vec![f64::NAN], vec![1.0]).is_err());
        assert!(PairedDataset::new(vec![vec![1.0, 2.0], vec![1.0]], vec![vec![0.0], vec![0.0]]).is_err());
        assert!(PairedDataset::from_flat(vec![1.0, 2.0, 3.0], vec![1.0], 3, 1).is_ok());
    }

    #[test]
    fn rows_and_swap() {
        let d = PairedDataset::new(vec![vec![1.0, 2.0], vec![3.0, 4.0]], vec![vec![5.0], vec![6.0]]).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.x(1), &[3.0, 4.0]);
        assert_eq!(d.y(0), &[5.0]);
        let s = d.swapped();
        assert_eq!(s.dim_x(), 1);
        assert_eq!(s.x(1), &[6.0]);
        assert_eq!(s.y(1), &[3.0, 4.0]);
    }

    #[test]
    fn resultant_length() {
        let p = PhaseSample::new(vec![0.0, 0.0, 0.0]).unwrap();
        assert!((p.rbar() - 1.0).abs() < 1e-15);
        let p = PhaseSample::new(vec![0.0, std::f64::consts::PI]).unwrap();
        assert!(p.rbar() < 1e-15);
        let p = PhaseSample::new(vec![-0.5, 7.0]).unwrap();
        assert!(p.theta().iter().all(|t| (0.0..TAU).contains(t)));
    }
}
