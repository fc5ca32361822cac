use thiserror::Error;

/// Errors raised by evaluation routines.
///
/// Every variant carries enough text to name the guard that fired; the CLI
/// prints it verbatim and exits with code 2.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("point {point} is within guard distance of the spiral {spiral}")]
    Spiral { spiral: String, point: String },
    #[error("pole: {0}")]
    Pole(String),
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    #[error("divergent series: {0}")]
    Divergent(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("outside the asymptotic regime: {0}")]
    Regime(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn spiral(spiral: impl Into<String>, point: impl std::fmt::Display) -> Self {
        Error::Spiral {
            spiral: spiral.into(),
            point: point.to_string(),
        }
    }

    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::Domain(_) => "domain",
            Error::Spiral { .. } => "spiral",
            Error::Pole(_) => "pole",
            Error::Degenerate(_) => "degenerate",
            Error::Divergent(_) => "divergent",
            Error::NoConvergence(_) => "no-convergence",
            Error::Regime(_) => "regime",
        }
    }
}
