//! Experiment configuration files.
//!
//! A configuration is a JSON object tagged by `kind`: `"sweep"` for a
//! replicated parameter sweep or `"itc-table"` for the phase-coherence table.
//! Unknown fields, parameters and axis names are rejected by name.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::datagen::{Sample, Scenario};
use crate::error::{Error, Result};
use crate::measure::{LogBayesFactor, PriorOdds};
use crate::models::{
    vonmises_log_bf, Comparator, CopulaComparator, Functional, GaussianBic, KnownGaussian, NoisyNormal,
    NoisyNormalParams,
};
use crate::numerics::quadrature::QuadratureSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ExperimentConfig {
    Sweep(SweepConfig),
    ItcTable(ItcConfig),
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        match &cfg {
            ExperimentConfig::Sweep(s) => s.validate()?,
            ExperimentConfig::ItcTable(t) => t.validate()?,
        }
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

/// A replicated sweep over the Cartesian product of `axes`.
///
/// `params` holds the fixed parameters; axes override them per cell. Both
/// share one namespace covering the sample size `n`, the scenario parameters
/// and the comparator parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub name: String,
    pub scenario: String,
    pub comparator: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    pub axes: Vec<Axis>,
    pub replications: usize,
    pub seed: u64,
    #[serde(default)]
    pub prior_log_odds: f64,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default)]
    pub output_dir: Option<String>,
}

/// Comparator names accepted in configurations.
pub const COMPARATOR_KINDS: [&str; 6] = ["noisy-normal", "functional", "copula", "nested-bic", "known", "vonmises"];

fn comparator_param_names(kind: &str) -> Result<&'static [&'static str]> {
    Ok(match kind {
        "noisy-normal" => &["tau2", "sigma2", "eps"],
        "functional" => &["tau2", "sigma2"],
        "known" => &["rho", "tau2"],
        "copula" | "nested-bic" | "vonmises" => &[],
        other => {
            return Err(Error::Config(format!(
                "unknown comparator '{other}' (expected one of {})",
                COMPARATOR_KINDS.join(", ")
            )))
        }
    })
}

/// A comparator bound to parameters, able to score either sample type.
pub enum CellComparator {
    Paired(Box<dyn Comparator>),
    VonMises(QuadratureSpec),
}

impl CellComparator {
    pub fn build(kind: &str, params: &BTreeMap<String, f64>, quadrature: &QuadratureSpec) -> Result<Self> {
        comparator_param_names(kind)?;
        let get = |key: &str| {
            params
                .get(key)
                .copied()
                .ok_or_else(|| Error::Config(format!("comparator '{kind}' needs parameter '{key}'")))
        };
        let or = |key: &str, d: f64| params.get(key).copied().unwrap_or(d);
        Ok(match kind {
            "noisy-normal" => {
                let mut p = NoisyNormalParams::new(or("tau2", 1.0), get("sigma2")?, or("eps", 0.0))?;
                p.quadrature = *quadrature;
                p.validate()?;
                CellComparator::Paired(Box::new(NoisyNormal(p)))
            }
            "functional" => {
                CellComparator::Paired(Box::new(Functional { tau2: or("tau2", 1.0), sigma2: get("sigma2")? }))
            }
            "known" => CellComparator::Paired(Box::new(KnownGaussian::new(get("rho")?, or("tau2", 1.0))?)),
            "copula" => CellComparator::Paired(Box::new(CopulaComparator)),
            "nested-bic" => CellComparator::Paired(Box::new(GaussianBic)),
            "vonmises" => CellComparator::VonMises(*quadrature),
            _ => unreachable!("kind validated above"),
        })
    }

    pub fn approximate(&self) -> bool {
        match self {
            CellComparator::Paired(c) => c.approximate(),
            CellComparator::VonMises(_) => false,
        }
    }

    pub fn evaluate(&self, sample: &Sample) -> Result<LogBayesFactor> {
        match (self, sample) {
            (CellComparator::Paired(c), Sample::Paired(d)) => c.log_bayes_factor(d),
            (CellComparator::VonMises(q), Sample::Phases(p)) => vonmises_log_bf(p.len(), p.rbar(), q),
            (CellComparator::Paired(c), Sample::Phases(_)) => {
                Err(Error::Config(format!("comparator '{}' needs paired data, scenario gives phases", c.name())))
            }
            (CellComparator::VonMises(_), Sample::Paired(_)) => {
                Err(Error::Config("comparator 'vonmises' needs a phase scenario".into()))
            }
        }
    }
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        match ExperimentConfig::from_json(text)? {
            ExperimentConfig::Sweep(s) => Ok(s),
            ExperimentConfig::ItcTable(_) => Err(Error::Config("expected a sweep configuration".into())),
        }
    }

    fn known_names(&self) -> Result<BTreeSet<&'static str>> {
        let mut names: BTreeSet<&'static str> = ["n"].into_iter().collect();
        names.extend(Scenario::param_names(&self.scenario)?);
        names.extend(comparator_param_names(&self.comparator)?);
        Ok(names)
    }

    pub fn validate(&self) -> Result<()> {
        let names = self.known_names()?;
        if let Some(k) = self.params.keys().find(|k| !names.contains(k.as_str())) {
            return Err(Error::Config(format!(
                "unknown parameter '{k}' for scenario '{}' and comparator '{}'",
                self.scenario, self.comparator
            )));
        }
        if self.axes.is_empty() {
            return Err(Error::Config("sweep needs at least one axis".into()));
        }
        let mut seen = BTreeSet::new();
        for axis in &self.axes {
            if !names.contains(axis.name.as_str()) {
                return Err(Error::Config(format!("unknown axis '{}'", axis.name)));
            }
            if !seen.insert(axis.name.as_str()) {
                return Err(Error::Config(format!("axis '{}' listed twice", axis.name)));
            }
            if axis.values.is_empty() {
                return Err(Error::Config(format!("axis '{}' has no values", axis.name)));
            }
            if let Some(v) = axis.values.iter().find(|v| !v.is_finite()) {
                return Err(Error::Config(format!("axis '{}' has non-finite value {v}", axis.name)));
            }
        }
        if self.replications == 0 {
            return Err(Error::Config("replications must be at least 1".into()));
        }
        PriorOdds::new(self.prior_log_odds).map_err(|e| Error::Config(e.to_string()))?;
        self.quadrature.validate().map_err(|e| Error::Config(e.to_string()))?;
        // resolve one cell so missing parameters surface before any work
        let first: BTreeMap<String, f64> =
            self.params.clone().into_iter().chain(self.axes.iter().map(|a| (a.name.clone(), a.values[0]))).collect();
        self.resolve_cell(&first).map_err(|e| match e {
            Error::Config(m) => Error::Config(m),
            other => Error::Config(other.to_string()),
        })?;
        Ok(())
    }

    /// Builds the scenario, sample size and comparator of one cell.
    pub fn resolve_cell(&self, params: &BTreeMap<String, f64>) -> Result<(Scenario, usize, CellComparator)> {
        let n = params
            .get("n")
            .copied()
            .ok_or_else(|| Error::Config("sample size 'n' must be a parameter or an axis".into()))?;
        if !(n >= 1.0) || n.fract() != 0.0 {
            return Err(Error::Config(format!("sample size must be a positive integer, got {n}")));
        }
        let scenario = Scenario::from_params(&self.scenario, params)?;
        let comparator = CellComparator::build(&self.comparator, params, &self.quadrature)?;
        Ok((scenario, n as usize, comparator))
    }
}

/// The phase-coherence table over an `N × R̄` grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ItcConfig {
    pub name: String,
    pub n_grid: Vec<usize>,
    pub rbar_grid: Vec<f64>,
    #[serde(default)]
    pub prior_log_odds: f64,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default)]
    pub output_dir: Option<String>,
}

impl ItcConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_grid.is_empty() || self.rbar_grid.is_empty() {
            return Err(Error::Config("n_grid and rbar_grid must be nonempty".into()));
        }
        PriorOdds::new(self.prior_log_odds).map_err(|e| Error::Config(e.to_string()))?;
        self.quadrature.validate().map_err(|e| Error::Config(e.to_string()))
    }
}
