use thiserror::Error;

/// Everything that can go wrong inside the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite sample at grid index ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("field has {found} values but the grid needs {expected}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("field has zero mass")]
    ZeroMass,

    #[error("field has zero kinetic energy")]
    ZeroKinetic,

    #[error("bracket [{lo}, {hi}] does not straddle the energy sign change: {reason}")]
    BadBracket { lo: f64, hi: f64, reason: String },

    #[error("no profile supplied for the critical scan")]
    MissingProfile,

    #[error("bad magic: expected DMNLSF2D")]
    BadMagic,

    #[error("version mismatch: file has {found}, reader supports {expected}")]
    VersionMismatch { found: u32, expected: u32 },

    #[error("truncated payload: expected {expected} bytes, found {found}")]
    TruncatedPayload { expected: usize, found: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParam(msg.into()))
}
