//! Model comparators.
//!
//! Each comparator pairs an independence model `H0` with a dependence model
//! `H1` and turns a dataset into `ln p(D|H1) - ln p(D|H0)`.

pub mod circular;
pub mod copula;
pub mod functional;
pub mod known;
pub mod misspec;
pub mod nested;
pub mod noisy_normal;

pub use circular::{n0_curve, vonmises_log_bf, vonmises_logr, vonmises_logr_stats, N0Curve};
pub use copula::{copula_ifm_fit, copula_lnbf, t_copula_ln_density, CopulaComparator, CopulaFit};
pub use functional::{functional_lnbf, Functional};
pub use known::{known_dist_lnbf, KnownGaussian};
pub use misspec::{misspecification_trend, SlopeSign, TrendReport};
pub use nested::{nested_bic_lnbf, GaussianBic};
pub use noisy_normal::{noisy_normal_lnbf, NoisyNormal, NoisyNormalParams, ScatterMatrix};

use crate::data::PairedDataset;
use crate::error::Result;
use crate::measure::LogBayesFactor;

/// A pair of hypotheses evaluated on paired data.
///
/// `dims()` is `(D0, D1)`, the number of free parameters under each
/// hypothesis. Evaluation is deterministic and free of shared mutable state.
pub trait Comparator: Send + Sync {
    fn name(&self) -> &'static str;

    fn dims(&self) -> (usize, usize);

    /// Whether exchanging `x` and `y` leaves the result unchanged.
    fn symmetric_xy(&self) -> bool;

    /// Whether the result drops an `O(1)` term.
    fn approximate(&self) -> bool;

    fn log_bayes_factor(&self, data: &PairedDataset) -> Result<LogBayesFactor>;
}
