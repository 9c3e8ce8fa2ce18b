use thiserror::Error;

/// Errors raised across the toolkit.
///
/// The CLI maps these onto process exit codes, see [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Fock dimension {dim}: need at least 2 levels")]
    InvalidDimension { dim: usize },

    #[error("operator dimensions differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("truncation too small: dim {dim} fails the tail guard, need at least {required}")]
    TruncationTooSmall { dim: usize, required: usize },

    #[error("unstable drive: |Ω_p/δ_a| = {ratio} must be below 1 for a bounded squeezed frame")]
    UnstableDrive { ratio: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("integration did not converge after {refinements} step halvings (last change {change:e})")]
    NonconvergentIntegration { refinements: u32, change: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// 0 success, 2 config error, 3 numerical nonconvergence, 4 truncation guard failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonconvergentIntegration { .. } => 3,
            Error::TruncationTooSmall { .. } => 4,
            Error::Io(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
