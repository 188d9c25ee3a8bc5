use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument {argument} outside supported range |w| <= {limit}")]
    Range { argument: f64, limit: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature did not converge: estimate {value}, error {error_estimate} after {evaluations} evaluations")]
    QuadratureNonConvergence {
        value: f64,
        error_estimate: f64,
        evaluations: usize,
    },

    #[error("negative density {value} beyond clamp threshold")]
    NegativeDensity { value: f64 },

    #[error("visibility undefined: max + min = 0")]
    UndefinedVisibility,

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("contract violation: {0}")]
    Contract(String),
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::QuadratureNonConvergence { .. }
                | Error::NegativeDensity { .. }
                | Error::UndefinedVisibility
                | Error::Numerical(_)
        )
    }
}
