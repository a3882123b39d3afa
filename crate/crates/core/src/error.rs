use thiserror::Error;

/// Errors produced by the verification library.
#[derive(Debug, Error)]
pub enum HardyError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("divergent integral: {0}")]
    DivergentIntegral(String),

    #[error("zero denominator: the input function vanishes identically")]
    ZeroDenominator,

    #[error("degenerate fit: {0}")]
    FitDegenerate(String),

    #[error("malformed step-function CSV: {0}")]
    MalformedCsv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl HardyError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        HardyError::InvalidParameter(msg.into())
    }

    pub(crate) fn divergent(msg: impl Into<String>) -> Self {
        HardyError::DivergentIntegral(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, HardyError>;
