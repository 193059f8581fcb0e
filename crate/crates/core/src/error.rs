use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invariant violation ({invariant}): {detail}")]
    InvariantViolation { invariant: String, detail: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("flip unavailable: {0}")]
    FlipUnavailable(String),
    #[error("empty complex: {0}")]
    EmptyComplex(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("window unstable: rank {at_margin} at margin {margin}, {at_next} at margin {next}")]
    WindowUnstable { margin: u32, at_margin: usize, next: u32, at_next: usize },
    #[error("convention failure: {0}")]
    ConventionFailure(String),
    #[error("model is not simple: {0}")]
    NotSimple(String),
    #[error("validation failure ({invariant}): {detail}")]
    ValidationFailure { invariant: String, detail: String },
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("normalization failure: {0}")]
    NormalizationFailure(String),
    #[error("identity mismatch in {which}: direct {direct}, formula {formula}")]
    IdentityMismatch { which: String, direct: usize, formula: usize },
    #[error("structure contradiction: {0}")]
    StructureContradiction(String),
    #[error("invalid surgery coefficient: {0}")]
    InvalidSurgery(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invariant(invariant: &str, detail: impl Into<String>) -> Self {
        Error::InvariantViolation { invariant: invariant.to_string(), detail: detail.into() }
    }

    pub(crate) fn validation(invariant: &str, detail: impl Into<String>) -> Self {
        Error::ValidationFailure { invariant: invariant.to_string(), detail: detail.into() }
    }

    /// Short stable name of the variant, used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "ParseError",
            Error::InvariantViolation { .. } => "InvariantViolation",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::FlipUnavailable(_) => "FlipUnavailable",
            Error::EmptyComplex(_) => "EmptyComplex",
            Error::WindowTooSmall(_) => "WindowTooSmall",
            Error::WindowUnstable { .. } => "WindowUnstable",
            Error::ConventionFailure(_) => "ConventionFailure",
            Error::NotSimple(_) => "NotSimple",
            Error::ValidationFailure { .. } => "ValidationFailure",
            Error::NoSolution(_) => "NoSolution",
            Error::NormalizationFailure(_) => "NormalizationFailure",
            Error::IdentityMismatch { .. } => "IdentityMismatch",
            Error::StructureContradiction(_) => "StructureContradiction",
            Error::InvalidSurgery(_) => "InvalidSurgery",
            Error::Io(_) => "IoError",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
