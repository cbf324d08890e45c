use thiserror::Error;

/// Errors raised by the numerical kernels and the distribution functions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative method or quadrature failed to reach its tolerance.
    #[error("no convergence in {what}: value {value:e}, achieved error {abs_error:e}")]
    NoConvergence {
        what: &'static str,
        value: f64,
        abs_error: f64,
    },

    /// A root bracket did not contain a sign change.
    #[error("bracket failure: {0}")]
    Bracket(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
