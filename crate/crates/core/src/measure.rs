//! The dependence measure family.
//!
//! Everything is carried as the natural-log posterior odds `lnr`. The other
//! members of the family are strictly increasing maps of it and are only
//! materialized on request, so values with `|lnr| > 700` never underflow.

use std::f64::consts::LN_10;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Prior log-odds `ln p(H1)/p(H0)`. Both prior probabilities must be non-zero,
/// so the value is always finite.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PriorOdds {
    log_odds: f64,
}

impl PriorOdds {
    /// Equal prior probabilities for both hypotheses.
    pub const EVEN: PriorOdds = PriorOdds { log_odds: 0.0 };

    pub fn new(log_odds: f64) -> Result<Self> {
        if !log_odds.is_finite() {
            return domain(format!("prior log-odds must be finite, got {log_odds}"));
        }
        Ok(Self { log_odds })
    }

    /// Builds the prior odds from `p(H1)`, which must lie strictly inside (0, 1).
    pub fn from_probability(p_h1: f64) -> Result<Self> {
        if !(p_h1 > 0.0 && p_h1 < 1.0) {
            return domain(format!("p(H1) must lie in (0, 1), got {p_h1}"));
        }
        Self::new(p_h1.ln() - (-p_h1).ln_1p())
    }

    pub fn log_odds(&self) -> f64 {
        self.log_odds
    }
}

/// Natural-log Bayes factor `ln p(D|H1)/p(D|H0)`.
///
/// `approximate` marks values from asymptotic comparators whose `O(1)` term
/// was dropped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogBayesFactor {
    value: f64,
    approximate: bool,
}

impl LogBayesFactor {
    /// An exact log Bayes factor. `±inf` is accepted for analytic limits; NaN is not.
    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() {
            return Err(Error::Domain("log Bayes factor is NaN".into()));
        }
        Ok(Self { value, approximate: false })
    }

    /// A log Bayes factor from an asymptotic approximation.
    pub fn approximate(value: f64) -> Result<Self> {
        Self::new(value).map(|b| Self { approximate: true, ..b })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn is_approximate(&self) -> bool {
        self.approximate
    }
}

/// The member of the measure family to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum View {
    /// Posterior probability `p(H1|D)`.
    Pr,
    /// Posterior odds `p(H1|D)/p(H0|D)`.
    R,
    /// Bayes factor, i.e. the posterior odds without the prior odds.
    Bf,
    /// Natural log of the posterior odds.
    Lnr,
    /// Base-10 log of the posterior odds.
    Logr,
}

impl View {
    pub const ALL: [View; 5] = [View::Pr, View::R, View::Bf, View::Lnr, View::Logr];

    pub fn as_str(&self) -> &'static str {
        match self {
            View::Pr => "pr",
            View::R => "r",
            View::Bf => "bf",
            View::Lnr => "lnr",
            View::Logr => "logr",
        }
    }
}

impl fmt::Display for View {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for View {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        View::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown view '{s}' (expected pr, r, bf, lnr or logr)")))
    }
}

/// Posterior evidence for dependence, stored as `lnr` alongside the two
/// terms it was built from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DependenceMeasure {
    lnr: f64,
    prior: PriorOdds,
    log_bf: LogBayesFactor,
}

/// Bayes updating in log space: `lnr = ln prior odds + ln BF`.
pub fn combine(prior: PriorOdds, log_bf: LogBayesFactor) -> DependenceMeasure {
    DependenceMeasure { lnr: prior.log_odds + log_bf.value, prior, log_bf }
}

impl DependenceMeasure {
    pub fn lnr(&self) -> f64 {
        self.lnr
    }

    pub fn logr(&self) -> f64 {
        self.lnr / LN_10
    }

    /// Posterior odds; saturates to `0` / `inf` outside the f64 range.
    pub fn r(&self) -> f64 {
        self.lnr.exp()
    }

    pub fn bf(&self) -> f64 {
        self.log_bf.value.exp()
    }

    /// Posterior probability of `H1`, via a logistic transform that never
    /// evaluates `exp` of a positive argument.
    pub fn pr(&self) -> f64 {
        logistic(self.lnr)
    }

    pub fn prior(&self) -> PriorOdds {
        self.prior
    }

    pub fn log_bayes_factor(&self) -> LogBayesFactor {
        self.log_bf
    }

    pub fn is_approximate(&self) -> bool {
        self.log_bf.approximate
    }

    pub fn view(&self, view: View) -> f64 {
        match view {
            View::Pr => self.pr(),
            View::R => self.r(),
            View::Bf => self.bf(),
            View::Lnr => self.lnr(),
            View::Logr => self.logr(),
        }
    }
}

/// Free-function form of [`DependenceMeasure::view`].
pub fn to_view(m: &DependenceMeasure, view: View) -> f64 {
    m.view(view)
}

fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Inverse of the probability view: `ln(p / (1 - p))`.
pub fn lnr_from_pr(p: f64) -> f64 {
    p.ln() - (-p).ln_1p()
}
