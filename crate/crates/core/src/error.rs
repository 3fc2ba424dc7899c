use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Parameters outside the domain where the construction is defined.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate denominator in {context} at n = {n}")]
    DegenerateDenominator { context: &'static str, n: usize },

    #[error("gamma function pole at z = {0}")]
    GammaPole(f64),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("eigenvalue {index} did not converge after {iterations} iterations")]
    NoConvergence { index: usize, iterations: usize },

    #[error("overlap matrix is not positive definite (pivot {pivot})")]
    NotPositiveDefinite { pivot: usize },

    #[error("integration did not reach tolerance {tolerance:e} within {evaluations} evaluations")]
    IntegrationBudget { tolerance: f64, evaluations: usize },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// Errors caused by user-supplied parameters rather than numerical breakdown.
    pub fn is_configuration(&self) -> bool {
        matches!(self, Error::InvalidParameter(_))
    }
}
