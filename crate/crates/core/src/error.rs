use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ground set must contain at least one point")]
    EmptyGroundSet,
    #[error("point {point} is outside the ground set 0..{n}")]
    PointOutOfRange { point: usize, n: usize },
    #[error("ground set mismatch: expected {expected} points, found {found}")]
    GroundMismatch { expected: usize, found: usize },
    #[error("unknown index label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate index label `{0}`")]
    DuplicateLabel(String),
    #[error("label `{0}` is already bound in the condition")]
    AlreadyBound(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("sizing error: {0}")]
    Sizing(String),
    #[error("mosaic pieces {first} and {second} have overlapping traces")]
    MosaicOverlap { first: usize, second: usize },
    #[error("unresolved dense-set id `{0}`")]
    UnresolvedId(String),
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }
}
