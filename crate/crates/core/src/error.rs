use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("invalid multi-index {labels:?} for a form on R^{dim}")]
    InvalidIndex { labels: Vec<usize>, dim: usize },

    #[error("matrix is not skew-symmetric")]
    NotSkew,

    #[error("not orthonormal: {0}")]
    NotOrthonormal(String),

    #[error("group is not finite within the cap of {cap} elements")]
    CapExceeded { cap: usize },

    #[error("group order {found} differs from the expected {expected}")]
    OrderMismatch { expected: usize, found: usize },

    #[error("sign convention mismatch: {0}")]
    ConventionMismatch(String),

    #[error("3-form does not generate a composition algebra: {0}")]
    NotGeneric(String),

    #[error("negative input: {0}")]
    NegativeInput(String),

    #[error("point {0:?} is too close to the origin")]
    NearOrigin(Vec<f64>),

    #[error("expected a unit vector, found |u| = {0}")]
    NotUnit(f64),

    #[error("residual check failed: {0}")]
    Residual(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable tag, used in CLI error JSON and FFI status codes.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::DegreeMismatch { .. } => "degree_mismatch",
            Error::InvalidIndex { .. } => "invalid_index",
            Error::NotSkew => "not_skew",
            Error::NotOrthonormal(_) => "not_orthonormal",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::OrderMismatch { .. } => "order_mismatch",
            Error::ConventionMismatch(_) => "convention_mismatch",
            Error::NotGeneric(_) => "not_generic",
            Error::NegativeInput(_) => "negative_input",
            Error::NearOrigin(_) => "near_origin",
            Error::NotUnit(_) => "not_unit",
            Error::Residual(_) => "residual",
            Error::Parse(_) => "parse",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Json(_) => "json",
            Error::Io(_) => "io",
        }
    }
}
