use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration value failed validation. `field` names the offending key.
    #[error("invalid configuration field `{field}`: {reason}")]
    InvalidConfig { field: String, reason: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The alternating binomial sum for cycle index `j` cannot be certified
    /// within the configured precision budget.
    #[error("alternating sum at j = {j} exceeds the precision budget (cap {cap}); use the Monte Carlo estimate")]
    PrecisionExceeded { j: usize, cap: usize },

    /// The requested quantile lies inside right-censored mass.
    #[error("quantile is indeterminate: it lies in censored mass above {lower_bound} s")]
    IndeterminateQuantile { lower_bound: f64 },

    #[error("tail fit unavailable: {0}")]
    FitUnavailable(String),

    #[error("quadrature did not reach tolerance: estimated error {error:e} after {subdivisions} subdivisions")]
    Quadrature { error: f64, subdivisions: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
