//! Seeded samplers for the simulation scenarios.
//!
//! Every generator is a pure function of its parameters and a 64-bit seed.

pub mod copula;
pub mod gaussian;
pub mod phase;
pub mod rossler;
pub mod seed;

use std::collections::BTreeMap;

pub use copula::{gen_gamma_tcopula, CopulaMode, GammaMargins};
pub use gaussian::{gen_bivariate_t, gen_functional, gen_independent_t, gen_noisy_normal, FunctionalModel};
pub use phase::{gen_phase, PhaseModel};
pub use rossler::{gen_rossler, RosslerConfig, RosslerSignal};

use crate::data::{PairedDataset, PhaseSample};
use crate::error::{Error, Result};
use crate::numerics::gamma_dist::GammaParams;

/// A generated sample: paired observations or circular phases.
#[derive(Debug, Clone, PartialEq)]
pub enum Sample {
    Paired(PairedDataset),
    Phases(PhaseSample),
}

/// A fully parameterized generative scenario (sample size excluded).
#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    NoisyNormal { rho: f64, tau2: f64, sigma2: f64 },
    Functional { model: FunctionalModel, tau2: f64, sigma2: f64 },
    GammaCopula { mode: CopulaMode, margins: GammaMargins },
    Rossler { coupling: f64, sigma2: f64, config: RosslerConfig },
    Phase(PhaseModel),
    BivariateT { rho: f64, nu: f64 },
    IndependentT { nu: f64 },
}

/// Scenario names accepted by [`Scenario::from_params`].
pub const SCENARIO_KINDS: [&str; 10] = [
    "noisy-normal",
    "functional-h0",
    "functional-h1",
    "gamma-tcopula",
    "gamma-independent",
    "rossler",
    "phase-uniform",
    "phase-vonmises",
    "bivariate-t",
    "independent-t",
];

const MARGIN_KEYS: [&str; 4] = ["shape_x", "rate_x", "shape_y", "rate_y"];
const ROSSLER_KEYS: [&str; 9] = ["coupling", "sigma2", "a", "b", "c", "mismatch", "dt", "transient", "sample_interval"];

struct Params<'a> {
    kind: &'a str,
    map: &'a BTreeMap<String, f64>,
}

impl Params<'_> {
    fn get(&self, key: &str) -> Result<f64> {
        self.map
            .get(key)
            .copied()
            .ok_or_else(|| Error::Config(format!("scenario '{}' needs parameter '{key}'", self.kind)))
    }

    fn or(&self, key: &str, default: f64) -> f64 {
        self.map.get(key).copied().unwrap_or(default)
    }

    fn margins(&self) -> Result<GammaMargins> {
        let d = GammaMargins::default();
        Ok(GammaMargins {
            x: GammaParams::new(self.or("shape_x", d.x.shape), self.or("rate_x", d.x.rate))?,
            y: GammaParams::new(self.or("shape_y", d.y.shape), self.or("rate_y", d.y.rate))?,
        })
    }
}

impl Scenario {
    /// Parameter names a scenario reads; anything else in a parameter map
    /// belongs to the comparator or is an error.
    pub fn param_names(kind: &str) -> Result<&'static [&'static str]> {
        Ok(match kind {
            "noisy-normal" => &["rho", "tau2", "sigma2"],
            "functional-h0" | "functional-h1" => &["tau2", "sigma2"],
            "gamma-tcopula" => &["rho", "nu", "shape_x", "rate_x", "shape_y", "rate_y"],
            "gamma-independent" => &MARGIN_KEYS,
            "rossler" => &ROSSLER_KEYS,
            "phase-uniform" => &[],
            "phase-vonmises" => &["mu", "kappa"],
            "bivariate-t" => &["rho", "nu"],
            "independent-t" => &["nu"],
            other => {
                return Err(Error::Config(format!(
                    "unknown scenario '{other}' (expected one of {})",
                    SCENARIO_KINDS.join(", ")
                )))
            }
        })
    }

    /// Builds a scenario from named parameters. Defaults: `tau2 = 1`,
    /// `nu = 5`, `mu = 0`, gamma margins `(4, 4)` and `(10, 5)`, and the
    /// [`RosslerConfig`] defaults.
    pub fn from_params(kind: &str, map: &BTreeMap<String, f64>) -> Result<Self> {
        Self::param_names(kind)?;
        let p = Params { kind, map };
        Ok(match kind {
            "noisy-normal" => {
                Scenario::NoisyNormal { rho: p.get("rho")?, tau2: p.or("tau2", 1.0), sigma2: p.get("sigma2")? }
            }
            "functional-h0" | "functional-h1" => Scenario::Functional {
                model: if kind == "functional-h1" { FunctionalModel::H1 } else { FunctionalModel::H0 },
                tau2: p.or("tau2", 1.0),
                sigma2: p.get("sigma2")?,
            },
            "gamma-tcopula" => Scenario::GammaCopula {
                mode: CopulaMode::StudentT { rho: p.get("rho")?, nu: p.or("nu", 5.0) },
                margins: p.margins()?,
            },
            "gamma-independent" => Scenario::GammaCopula { mode: CopulaMode::Product, margins: p.margins()? },
            "rossler" => {
                let d = RosslerConfig::default();
                let config = RosslerConfig {
                    a: p.or("a", d.a),
                    b: p.or("b", d.b),
                    c: p.or("c", d.c),
                    mismatch: p.or("mismatch", d.mismatch),
                    dt: p.or("dt", d.dt),
                    transient: p.or("transient", d.transient),
                    sample_interval: p.or("sample_interval", d.sample_interval),
                };
                config.validate()?;
                Scenario::Rossler { coupling: p.get("coupling")?, sigma2: p.get("sigma2")?, config }
            }
            "phase-uniform" => Scenario::Phase(PhaseModel::Uniform),
            "phase-vonmises" => Scenario::Phase(PhaseModel::VonMises { mu: p.or("mu", 0.0), kappa: p.get("kappa")? }),
            "bivariate-t" => Scenario::BivariateT { rho: p.get("rho")?, nu: p.or("nu", 5.0) },
            "independent-t" => Scenario::IndependentT { nu: p.or("nu", 5.0) },
            _ => unreachable!("kind validated by param_names"),
        })
    }

    /// Draws a sample of size `n` from a single seed.
    pub fn generate(&self, n: usize, seed: u64) -> Result<Sample> {
        Ok(match *self {
            Scenario::NoisyNormal { rho, tau2, sigma2 } => {
                Sample::Paired(gen_noisy_normal(rho, tau2, sigma2, n, seed)?)
            }
            Scenario::Functional { model, tau2, sigma2 } => {
                Sample::Paired(gen_functional(model, tau2, sigma2, n, seed)?)
            }
            Scenario::GammaCopula { mode, ref margins } => Sample::Paired(gen_gamma_tcopula(mode, margins, n, seed)?),
            Scenario::Rossler { coupling, sigma2, ref config } => {
                Sample::Paired(gen_rossler(config, coupling, sigma2, n, seed)?)
            }
            Scenario::Phase(model) => Sample::Phases(gen_phase(model, n, seed)?),
            Scenario::BivariateT { rho, nu } => Sample::Paired(gen_bivariate_t(rho, nu, n, seed)?),
            Scenario::IndependentT { nu } => Sample::Paired(gen_independent_t(nu, n, seed)?),
        })
    }

    /// Per-cell preparation for replicated experiments.
    ///
    /// The Rössler scenario integrates one trajectory per cell from
    /// `cell_seed` and varies only the observation noise across replications;
    /// every other scenario draws a fresh sample per replication.
    pub fn prepare(&self, n: usize, cell_seed: u64) -> Result<Prepared> {
        Ok(match *self {
            Scenario::Rossler { coupling, sigma2, ref config } => {
                Prepared::Rossler { signal: RosslerSignal::generate(config, coupling, n, cell_seed)?, sigma2 }
            }
            _ => Prepared::Fresh { scenario: self.clone(), n },
        })
    }
}

/// A scenario bound to a sample size, ready to draw replications.
#[derive(Debug, Clone)]
pub enum Prepared {
    Fresh { scenario: Scenario, n: usize },
    Rossler { signal: RosslerSignal, sigma2: f64 },
}

impl Prepared {
    pub fn draw(&self, rep_seed: u64) -> Result<Sample> {
        match self {
            Prepared::Fresh { scenario, n } => scenario.generate(*n, rep_seed),
            Prepared::Rossler { signal, sigma2 } => Ok(Sample::Paired(signal.with_noise(*sigma2, rep_seed)?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn builds_from_named_parameters() {
        let s = Scenario::from_params("noisy-normal", &params(&[("rho", 0.5), ("sigma2", 0.1)])).unwrap();
        assert_eq!(s, Scenario::NoisyNormal { rho: 0.5, tau2: 1.0, sigma2: 0.1 });
        let direct = gen_noisy_normal(0.5, 1.0, 0.1, 10, 4).unwrap();
        assert_eq!(s.generate(10, 4).unwrap(), Sample::Paired(direct));
    }

    #[test]
    fn missing_and_unknown_kinds_are_config_errors() {
        let err = Scenario::from_params("noisy-normal", &params(&[("sigma2", 0.1)])).unwrap_err();
        assert!(matches!(err, Error::Config(ref m) if m.contains("'rho'")));
        assert!(matches!(Scenario::from_params("lorenz", &params(&[])), Err(Error::Config(_))));
    }

    #[test]
    fn every_kind_parses() {
        let all = params(&[("rho", 0.3), ("sigma2", 0.1), ("kappa", 1.0), ("coupling", 0.1), ("transient", 1.0)]);
        for kind in SCENARIO_KINDS {
            let s = Scenario::from_params(kind, &all).unwrap();
            assert!(s.generate(5, 1).is_ok(), "{kind}");
        }
    }

    #[test]
    fn fresh_preparation_matches_direct_generation() {
        let s = Scenario::BivariateT { rho: 0.2, nu: 5.0 };
        let p = s.prepare(12, 99).unwrap();
        assert_eq!(p.draw(7).unwrap(), s.generate(12, 7).unwrap());
    }
}
