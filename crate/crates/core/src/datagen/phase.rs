//! Circular samplers.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::seed::rng_from_seed;
use crate::data::PhaseSample;
use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "model")]
pub enum PhaseModel {
    Uniform,
    VonMises { mu: f64, kappa: f64 },
}

/// Best-Fisher rejection sampler for the von Mises distribution; `κ = 0`
/// falls through to the uniform.
pub fn sample_von_mises<R: Rng + ?Sized>(rng: &mut R, mu: f64, kappa: f64) -> f64 {
    if kappa == 0.0 {
        return rng.random_range(0.0..TAU);
    }
    let root = (1.0 + 4.0 * kappa * kappa).sqrt();
    let tau = 1.0 + root;
    // (τ - √(2τ)) / 2κ rearranged to avoid cancellation at small κ
    let rho = 2.0 * kappa * tau / ((root + 1.0) * (tau + (2.0 * tau).sqrt()));
    let r = (1.0 + rho * rho) / (2.0 * rho);
    loop {
        let u1: f64 = rng.random();
        let u2: f64 = rng.random();
        let u3: f64 = rng.random();
        let z = (PI * u1).cos();
        let f = (1.0 + r * z) / (r + z);
        let c = kappa * (r - f);
        if c * (2.0 - c) > u2 || (c / u2).ln() + 1.0 - c >= 0.0 {
            let theta = f.clamp(-1.0, 1.0).acos();
            return if u3 > 0.5 { mu + theta } else { mu - theta };
        }
    }
}

pub fn gen_phase(model: PhaseModel, n: usize, seed: u64) -> Result<PhaseSample> {
    let mut rng = rng_from_seed(seed);
    let theta = match model {
        PhaseModel::Uniform => (0..n).map(|_| rng.random_range(0.0..TAU)).collect(),
        PhaseModel::VonMises { mu, kappa } => {
            if !(kappa >= 0.0) || !kappa.is_finite() || !mu.is_finite() {
                return domain(format!("von Mises needs finite mu and kappa >= 0, got ({mu}, {kappa})"));
            }
            (0..n).map(|_| sample_von_mises(&mut rng, mu, kappa)).collect()
        }
    };
    PhaseSample::new(theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quadrature::GaussLegendre;

    /// `A(κ) = I1(κ)/I0(κ)` from the integral representations on `[0, π]`.
    fn bessel_ratio(kappa: f64) -> f64 {
        let gl = GaussLegendre::new(40);
        let i1 = gl.integrate(|t| (kappa * t.cos()).exp() * t.cos(), 0.0, PI);
        let i0 = gl.integrate(|t| (kappa * t.cos()).exp(), 0.0, PI);
        i1 / i0
    }

    #[test]
    fn zero_concentration_is_diffuse() {
        let p = gen_phase(PhaseModel::VonMises { mu: 1.0, kappa: 0.0 }, 100_000, 1).unwrap();
        assert!(p.rbar() < 0.02);
    }

    #[test]
    fn concentrated_resultant_matches_bessel_ratio() {
        let p = gen_phase(PhaseModel::VonMises { mu: 0.0, kappa: 10.0 }, 100_000, 2).unwrap();
        let a = bessel_ratio(10.0);
        assert!((a - 0.9486).abs() < 1e-3);
        assert!((p.rbar() - a).abs() < 0.01);
        let small = gen_phase(PhaseModel::VonMises { mu: 2.0, kappa: 0.5 }, 200_000, 3).unwrap();
        assert!((small.rbar() - bessel_ratio(0.5)).abs() < 0.01);
    }

    #[test]
    fn mean_direction_is_respected() {
        let p = gen_phase(PhaseModel::VonMises { mu: 2.0, kappa: 4.0 }, 50_000, 4).unwrap();
        let (s, c) = p.theta().iter().fold((0.0, 0.0), |(s, c), t| (s + t.sin(), c + t.cos()));
        assert!((s.atan2(c) - 2.0).abs() < 0.02);
    }

    #[test]
    fn uniform_resultant_is_chi_square_scaled() {
        // 2 N R̄² is approximately χ²₂; its 99th percentile is 9.21
        let within = (0..100)
            .filter(|&r| {
                let p = gen_phase(PhaseModel::Uniform, 100_000, 1000 + r).unwrap();
                2.0 * 100_000.0 * p.rbar() * p.rbar() < 9.21
            })
            .count();
        assert!(within >= 98, "{within}");
    }

    #[test]
    fn rejects_negative_concentration() {
        assert!(gen_phase(PhaseModel::VonMises { mu: 0.0, kappa: -1.0 }, 5, 1).is_err());
    }
}
