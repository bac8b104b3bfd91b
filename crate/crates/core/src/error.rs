use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative or adaptive routine hit its iteration/subdivision cap.
    /// `partial` holds the best value reached before giving up.
    #[error("numeric failure in {routine}: {reason} (partial value {partial:e})")]
    NumericFailure {
        routine: &'static str,
        reason: String,
        partial: f64,
    },

    /// A closed form whose underlying integral diverges for these parameters.
    #[error("divergent expression: {0}")]
    Divergence(String),

    /// Network parameters violating one of the model invariants.
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
