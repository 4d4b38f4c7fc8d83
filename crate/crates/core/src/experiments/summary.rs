//! Per-cell quartile summaries.
//!
//! Quantiles use the nearest-rank rule: the `p`-quantile of `n` sorted values
//! is the value at 1-based rank `ceil(p·n)` (rank 1 when `p·n` rounds to 0).

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub axis_values: Vec<f64>,
    /// Replications with a finite-or-infinite (non-NaN) value.
    pub m: usize,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub frac_positive: f64,
    pub mean: f64,
}

/// Nearest-rank quantile of an ascending slice.
pub fn nearest_rank(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let rank = ((p * n as f64).ceil() as usize).clamp(1, n);
    sorted[rank - 1]
}

pub(crate) fn median_of(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    nearest_rank(&v, 0.5)
}

/// Summarizes the non-NaN values of one cell.
pub fn summarize(axis_values: Vec<f64>, values: &[f64]) -> Result<CellSummary> {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| !x.is_nan()).collect();
    if v.is_empty() {
        return domain("cannot summarize a cell without values");
    }
    v.sort_by(f64::total_cmp);
    let m = v.len();
    Ok(CellSummary {
        axis_values,
        m,
        q25: nearest_rank(&v, 0.25),
        median: nearest_rank(&v, 0.5),
        q75: nearest_rank(&v, 0.75),
        frac_positive: v.iter().filter(|&&x| x > 0.0).count() as f64 / m as f64,
        mean: v.iter().sum::<f64>() / m as f64,
    })
}
