use thiserror::Error;

/// Errors raised by state construction, measurement and optimization routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QcorrError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("not a valid density matrix: most negative eigenvalue {min_eigenvalue:e}")]
    InvalidState { min_eigenvalue: f64 },

    #[error("matrix is not of X shape; offending entries: {entries:?}")]
    NotXShape { entries: Vec<(usize, usize)> },

    #[error("measurement outcome {outcome} has vanishing probability {probability:e}")]
    DegenerateOutcome { outcome: usize, probability: f64 },

    #[error("analytic derivative is singular at theta={theta}, phi={phi}")]
    SingularPoint { theta: f64, phi: f64 },

    #[error("gap derivative has infinite slope: |a cos(theta)| = 1")]
    InfiniteSlope,

    #[error("no root found: {0}")]
    RootNotFound(String),

    #[error("kraus operators are not complete: residual {residual:e}")]
    IncompleteChannel { residual: f64 },

    #[error("not applicable: {0}")]
    NotApplicable(String),
}

pub type Result<T> = std::result::Result<T, QcorrError>;
