//! Two diffusively coupled Rössler oscillators with a frequency mismatch.
//!
//! `dx_i = -ω_i y_i - z_i + C (x_j - x_i)`, `dy_i = ω_i x_i + a y_i`,
//! `dz_i = b + z_i (x_i - c)`, with `ω_{1,2} = 1 ± Δ`.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::seed::{mix, rng_from_seed};
use crate::data::PairedDataset;
use crate::error::{domain, Error, Result};
use crate::numerics::ode::{rk4_sampled, OdeState};

/// Sub-stream indices of a trajectory seed.
const IC_STREAM_1: u64 = 1;
const IC_STREAM_2: u64 = 2;
const NOISE_STREAM: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RosslerConfig {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Frequency mismatch `Δ`.
    pub mismatch: f64,
    /// Integration step in seconds.
    pub dt: f64,
    /// Seconds integrated and discarded before sampling.
    pub transient: f64,
    /// Seconds between retained samples.
    pub sample_interval: f64,
}

impl Default for RosslerConfig {
    fn default() -> Self {
        Self { a: 0.165, b: 0.2, c: 10.0, mismatch: 0.015, dt: 1e-3, transient: 500.0, sample_interval: 1.0 }
    }
}

impl RosslerConfig {
    pub fn validate(&self) -> Result<()> {
        let ratio = self.sample_interval / self.dt;
        if !(self.dt > 0.0) || !(self.sample_interval > 0.0) || (ratio - ratio.round()).abs() > 1e-9 {
            return domain("sample_interval must be a positive multiple of dt");
        }
        if !(self.transient >= 0.0) || !self.transient.is_finite() {
            return domain("transient must be non-negative");
        }
        if ![self.a, self.b, self.c, self.mismatch].iter().all(|v| v.is_finite()) {
            return domain("Rössler constants must be finite");
        }
        Ok(())
    }

    fn omegas(&self) -> (f64, f64) {
        (1.0 + self.mismatch, 1.0 - self.mismatch)
    }
}

/// Initial state of one oscillator, drawn near the attractor.
fn initial_state(seed: u64) -> [f64; 3] {
    let mut rng = rng_from_seed(seed);
    [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(0.0..1.0)]
}

fn derivative(cfg: &RosslerConfig, coupling: f64, w1: f64, w2: f64, s: &[f64; 6]) -> [f64; 6] {
    let (x1, y1, z1, x2, y2, z2) = (s[0], s[1], s[2], s[3], s[4], s[5]);
    [
        -w1 * y1 - z1 + coupling * (x2 - x1),
        w1 * x1 + cfg.a * y1,
        cfg.b + z1 * (x1 - cfg.c),
        -w2 * y2 - z2 + coupling * (x1 - x2),
        w2 * x2 + cfg.a * y2,
        cfg.b + z2 * (x2 - cfg.c),
    ]
}

/// Raw `(x1, x2)` samples after the transient: `n_samples` values taken at
/// `transient + k·sample_interval`.
pub fn rossler_trajectory(
    cfg: &RosslerConfig,
    coupling: f64,
    n_samples: usize,
    seed: u64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    cfg.validate()?;
    if !(coupling >= 0.0) || !coupling.is_finite() {
        return domain(format!("coupling must be non-negative, got {coupling}"));
    }
    if n_samples == 0 {
        return domain("need at least one sample");
    }
    let a = initial_state(mix(seed, IC_STREAM_1));
    let b = initial_state(mix(seed, IC_STREAM_2));
    let y0 = OdeState::new(0.0, [a[0], a[1], a[2], b[0], b[1], b[2]]);
    let every = (cfg.sample_interval / cfg.dt).round() as usize;
    let skip = (cfg.transient / cfg.sample_interval).round() as usize;
    let t_end = (skip + n_samples - 1) as f64 * cfg.sample_interval;
    let (w1, w2) = cfg.omegas();
    let traj =
        rk4_sampled(|_, s: &[f64; 6]| derivative(cfg, coupling, w1, w2, s), y0, t_end, cfg.dt, every).map_err(|e| {
            match e {
                Error::Divergence { t, context } => {
                    Error::Divergence { t, context: format!("Rössler C = {coupling}, seed = {seed}: {context}") }
                }
                other => other,
            }
        })?;
    Ok(traj[skip..skip + n_samples].iter().map(|s| (s.y[0], s.y[3])).unzip())
}

/// Shifts and scales to mean 0 and unit variance (divisor `N`). A constant
/// column becomes all zeros.
pub fn standardize(v: &mut [f64]) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let sd = (v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n).sqrt();
    for x in v.iter_mut() {
        *x = if sd > 0.0 { (*x - mean) / sd } else { 0.0 };
    }
}

/// A standardized noise-free trajectory, reusable across noise replications.
#[derive(Debug, Clone, PartialEq)]
pub struct RosslerSignal {
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
}

impl RosslerSignal {
    pub fn generate(cfg: &RosslerConfig, coupling: f64, n_samples: usize, seed: u64) -> Result<Self> {
        let (mut x1, mut x2) = rossler_trajectory(cfg, coupling, n_samples, seed)?;
        standardize(&mut x1);
        standardize(&mut x2);
        Ok(Self { x1, x2 })
    }

    /// Adds independent `N(0, σ²)` observation noise to both columns.
    pub fn with_noise(&self, sigma2: f64, seed: u64) -> Result<PairedDataset> {
        if !(sigma2 >= 0.0) || !sigma2.is_finite() {
            return domain(format!("sigma2 must be non-negative, got {sigma2}"));
        }
        let noise = Normal::new(0.0, sigma2.sqrt()).expect("checked variance");
        let mut rng = rng_from_seed(seed);
        let xs = self.x1.iter().map(|v| v + noise.sample(&mut rng)).collect();
        let ys = self.x2.iter().map(|v| v + noise.sample(&mut rng)).collect();
        PairedDataset::univariate(xs, ys)
    }
}

/// Standardized coupled-Rössler pairs plus observation noise, all from one seed.
pub fn gen_rossler(
    cfg: &RosslerConfig,
    coupling: f64,
    sigma2: f64,
    n_seconds: usize,
    seed: u64,
) -> Result<PairedDataset> {
    RosslerSignal::generate(cfg, coupling, n_seconds, seed)?.with_noise(sigma2, mix(seed, NOISE_STREAM))
}
