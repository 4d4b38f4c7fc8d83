use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical routine did not reach its tolerance. `estimate` is the best value found.
    #[error("{stage}: tolerance not reached (estimate {estimate}, relative error {rel_err:e})")]
    Accuracy { stage: &'static str, estimate: f64, rel_err: f64 },

    /// A density or likelihood returned NaN.
    #[error("density evaluation returned NaN at sample {index}")]
    Evaluation { index: usize },

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("trajectory diverged at t = {t} ({context})")]
    Divergence { t: f64, context: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{failures} of {replications} replications failed in cell [{cell}]: {first}")]
    CellFailure { cell: String, failures: usize, replications: usize, first: String },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by the caller's input rather than by the numerics.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Domain(_) | Error::Config(_) | Error::Parse(_) | Error::Io(_) | Error::Csv(_) | Error::Json(_)
        )
    }
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
