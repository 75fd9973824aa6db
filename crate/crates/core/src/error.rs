use thiserror::Error;

/// Errors raised by the numerical pipeline.
///
/// Scalar payloads are carried as `f64` regardless of the working precision so
/// the error type stays non-generic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid configuration: {}", .0.join("; "))]
    InvalidConfig(Vec<String>),

    #[error("{quantity} = {value} outside admissible domain ({reason})")]
    Domain { quantity: &'static str, value: f64, reason: &'static str },

    #[error("level {index} is shallow (a*rho0 = {arho0:.4}): peaked approximation invalid")]
    ShallowLevel { index: usize, arho0: f64 },

    #[error("outside validated regime: {0}")]
    OutsideValidatedRegime(String),

    #[error("pole classification failed: {0}")]
    Classification(String),

    #[error("{operation} did not converge after {iterations} iterations (achieved {achieved:e})")]
    NoConvergence { operation: &'static str, iterations: usize, achieved: f64 },

    #[error(
        "quadrature did not reach tolerance {requested:e} (achieved {achieved:e} after {subdivisions} subdivisions)"
    )]
    Quadrature { requested: f64, achieved: f64, subdivisions: usize },

    #[error("{0}")]
    Numerical(String),
}

impl Error {
    /// True for failures of a numerical kernel, as opposed to bad input or a
    /// configuration that lies outside the model's regime of validity.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. } | Error::Quadrature { .. } | Error::Numerical(_) | Error::Classification(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
