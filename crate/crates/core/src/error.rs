use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("no {dim}-dimensional component met the slice: {detail}")]
    WitnessDimension { dim: usize, detail: String },
    #[error("jacobian is singular or too ill-conditioned for a linear solve")]
    SingularJacobian,
    #[error("intersection matrix is singular")]
    SingularMatrix,
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("unsupported product: {0}")]
    UnsupportedProduct(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("malformed document: {0}")]
    Parse(String),
    #[error("quadric is singular or not symmetric: {0}")]
    SingularQuadric(String),
    #[error("flag is degenerate: {0}")]
    DegenerateFlag(String),
    #[error("path tracking failed: {0}")]
    TrackingFailure(String),
    #[error("membership test inconclusive: {0}")]
    Inconclusive(String),
    #[error("expected {expected} solutions, found {found}: {detail}")]
    GenericityWarning {
        expected: usize,
        found: usize,
        detail: String,
    },
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable name used in CLI error payloads.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } | Error::WitnessDimension { .. } => "DimensionMismatch",
            Error::SingularJacobian => "SingularJacobian",
            Error::SingularMatrix => "SingularMatrix",
            Error::IndexOutOfRange(_) => "IndexOutOfRange",
            Error::UnsupportedProduct(_) => "UnsupportedProduct",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::Precondition(_) => "Precondition",
            Error::Parse(_) => "MalformedDocument",
            Error::SingularQuadric(_) => "SingularQuadric",
            Error::DegenerateFlag(_) => "DegenerateFlag",
            Error::TrackingFailure(_) => "TrackingFailure",
            Error::Inconclusive(_) => "Inconclusive",
            Error::GenericityWarning { .. } => "GenericityWarning",
            Error::Io(_) => "Io",
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
