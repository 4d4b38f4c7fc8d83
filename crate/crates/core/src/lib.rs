//! Inferential measures of dependence between two observed systems.
//!
//! Dependence in a dataset is scored by comparing an independence model `H0`
//! against a dependence model `H1`. The result is the posterior log-odds of
//! `H1`, exposed together with its monotone transforms (posterior probability,
//! odds, Bayes factor, base-10 log-odds).
//!
//! Modules:
//! - [`measure`]: the measure family and the prior/evidence combination rule.
//! - [`numerics`]: quadrature, special functions, optimization and ODE kernels.
//! - [`models`]: the model comparators producing log Bayes factors.
//! - [`datagen`]: seeded samplers for the simulation scenarios.
//! - [`experiments`]: replicated parameter sweeps and their summaries.
//! - [`io`]: dataset and phase-sample file formats.

// `!(x > 0.0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod data;
pub mod datagen;
pub mod error;
pub mod experiments;
pub mod io;
pub mod measure;
pub mod models;
pub mod numerics;
pub mod parallel;

pub use data::{PairedDataset, PhaseSample};
pub use error::{Error, Result};
pub use measure::{combine, DependenceMeasure, LogBayesFactor, PriorOdds, View};
pub use parallel::Execution;
