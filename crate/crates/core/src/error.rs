use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),

    #[error("elements belong to different groups")]
    MixedGroups,

    #[error("element {0} lies outside the explored region")]
    OutsideRegion(String),

    #[error("vertices {0} and {1} are not connected")]
    Unreachable(usize, usize),

    #[error("no filling exists inside the allowed region")]
    Infeasible,

    #[error("truncation unsafe: {0}")]
    TruncationUnsafe(String),

    #[error("dimension cap exceeded: need {needed}, complex built up to {cap}")]
    DimensionCap { needed: usize, cap: usize },

    #[error("chain is not a cycle")]
    NotACycle,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn parse(offset: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: msg.into(),
        }
    }
}
