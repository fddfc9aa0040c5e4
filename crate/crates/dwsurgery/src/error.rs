use thiserror::Error;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("topology error: {0}")]
    Topology(String),
    #[error("invalid cochain: {0}")]
    InvalidCochain(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("surgery coefficient {p}/{q} is not a coprime pair")]
    NotCoprime { p: i64, q: i64 },
    #[error("no trivialization of the pulled-back cocycle for element {0}")]
    NoTrivialization(u32),
    #[error("interface label mismatch: {0}")]
    LabelMismatch(String),
    #[error("characterization of the core element failed: {0}")]
    CharacterizationFailure(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("validation error: {0}")]
    Validation(String),
}

impl Error {
    /// Short machine-readable tag, used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidGroup(_) => "InvalidGroup",
            Error::TooLarge(_) => "TooLarge",
            Error::ZeroDenominator => "ZeroDenominator",
            Error::Parse(_) => "ParseError",
            Error::Topology(_) => "TopologyError",
            Error::InvalidCochain(_) => "InvalidCochain",
            Error::NoSolution(_) => "NoSolution",
            Error::NotCoprime { .. } => "NotCoprime",
            Error::NoTrivialization(_) => "NoTrivialization",
            Error::LabelMismatch(_) => "LabelMismatch",
            Error::CharacterizationFailure(_) => "CharacterizationFailure",
            Error::Internal(_) => "InternalError",
            Error::Validation(_) => "ValidationError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
