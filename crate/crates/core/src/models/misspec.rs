//! Behaviour of a comparator when the data come from neither hypothesis.
//!
//! The comparator acts as if the hypothesis closer to the generator (in
//! Kullback-Leibler divergence) were true, so the median log Bayes factor
//! drifts upwards with `N` when `H1` is closer and downwards when `H0` is.
//! The report gives the sign of that drift.

use serde::Serialize;

use super::Comparator;
use crate::data::PairedDataset;
use crate::datagen::seed::mix;
use crate::error::{domain, Error, Result};
use crate::experiments::summary::median_of;
use crate::parallel::{map_indices, Execution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SlopeSign {
    Increasing,
    Decreasing,
    Flat,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendReport {
    pub n_grid: Vec<usize>,
    /// Median `ln BF` at each `N`.
    pub medians: Vec<f64>,
    /// Least-squares slope of the medians against `N`.
    pub slope: f64,
    pub sign: SlopeSign,
}

/// Least-squares slope of `ys` against `xs`.
pub(crate) fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Runs `replications` datasets of each size in `n_grid` through `comparator`.
///
/// `generator(n, seed)` must be deterministic; replication `r` at size `n`
/// uses the seed `mix(mix(seed, n), r)`.
pub fn misspecification_trend<G>(
    generator: G,
    comparator: &dyn Comparator,
    n_grid: &[usize],
    replications: usize,
    seed: u64,
    exec: Execution,
) -> Result<TrendReport>
where
    G: Fn(usize, u64) -> Result<PairedDataset> + Sync,
{
    if n_grid.len() < 2 {
        return domain("misspecification trend needs at least two sample sizes");
    }
    if replications == 0 {
        return domain("replications must be at least 1");
    }
    let mut medians = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let cell_seed = mix(seed, n as u64);
        let values = map_indices(replications, exec, |r| {
            let data = generator(n, mix(cell_seed, r as u64))?;
            comparator.log_bayes_factor(&data).map(|b| b.value())
        });
        let values = values.into_iter().collect::<Result<Vec<f64>>>()?;
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::Evaluation { index: n });
        }
        medians.push(median_of(&values));
    }
    let xs: Vec<f64> = n_grid.iter().map(|&n| n as f64).collect();
    let slope = ls_slope(&xs, &medians);
    let sign = if slope > 0.0 {
        SlopeSign::Increasing
    } else if slope < 0.0 {
        SlopeSign::Decreasing
    } else {
        SlopeSign::Flat
    };
    Ok(TrendReport { n_grid: n_grid.to_vec(), medians, slope, sign })
}
