use thiserror::Error;

/// Errors raised while reading a diagram.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("malformed diagram JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("edge label {0} is not a positive integer")]
    BadLabel(i64),
    #[error("edge label {label} occurs {count} time(s); every label must occur exactly twice")]
    LabelCount { label: u64, count: usize },
    #[error("singular index {index} is out of range for {len} crossing(s)")]
    SingularIndex { index: usize, len: usize },
    #[error("singular index {0} is listed more than once")]
    DuplicateSingular(usize),
    #[error(
        "strand through edge {0} has contradictory orientation (incoming slot used as outgoing)"
    )]
    Orientation(u64),
    #[error("PD code is not planar (it needs a surface of genus {0})")]
    NonPlanar(usize),
    #[error("bad braid word: {0}")]
    Braid(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("diagrams do not differ at a single double point: {0}")]
    SiteMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn contract<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Contract(msg.into()))
}
