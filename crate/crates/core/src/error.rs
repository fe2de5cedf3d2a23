use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FjltError {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("index error: {index} out of range (bound {bound})")]
    Index { index: usize, bound: usize },

    /// The code matrix needs `d >= 2^(2m+1)` with `2^m >= k`.
    #[error("infeasible dimensions: k={k} requires d to be a multiple of {min_d}, got d={d}")]
    InfeasibleDimensions { k: usize, d: usize, min_d: usize },

    #[error("argument error: {0}")]
    Argument(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("resource error: {0}")]
    Resource(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("truncation uncertain: {0}")]
    TruncationUncertain(String),

    #[error("io error: {0}")]
    Io(String),
}

impl FjltError {
    /// Short machine-readable tag, used by the CLI and the C ABI.
    pub fn kind(&self) -> &'static str {
        match self {
            FjltError::Dimension(_) => "dimension",
            FjltError::Index { .. } => "index",
            FjltError::InfeasibleDimensions { .. } => "infeasible-dimensions",
            FjltError::Argument(_) => "argument",
            FjltError::Format(_) => "format",
            FjltError::Resource(_) => "resource",
            FjltError::Fit(_) => "fit",
            FjltError::Range(_) => "range",
            FjltError::TruncationUncertain(_) => "truncation-uncertain",
            FjltError::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for FjltError {
    fn from(e: std::io::Error) -> Self {
        FjltError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, FjltError>;
