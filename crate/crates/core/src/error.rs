use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or semantically invalid input (points, trees, grid graphs, files).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An algorithm parameter is outside its valid range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// An exponential search space exceeds the enforced cap.
    #[error("{what}: size {size} exceeds cap {cap} ({detail})")]
    CapExceeded {
        what: &'static str,
        size: u128,
        cap: u128,
        detail: String,
    },

    /// A geometric quantity is undefined for the given arguments.
    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    /// A generated artifact failed its own audit.
    #[error("audit failure: {0}")]
    Audit(String),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by the caller's input rather than internal failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_)
                | Error::Parameter(_)
                | Error::Degenerate(_)
                | Error::UnknownFixture(_)
                | Error::Json(_)
                | Error::Csv(_)
        )
    }
}
