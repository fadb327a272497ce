use thiserror::Error;

use crate::series::Space;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("operands live in different variable spaces ({0:?} vs {1:?})")]
    SpaceMismatch(Space, Space),

    #[error("denominator factor (1 - m) with m of zero degree cannot be expanded")]
    Divergent,

    #[error("operation is only defined for d = {expected}, got d = {got}")]
    UnsupportedDimension { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("exponent vector {0} does not describe a partition")]
    NotAPartition(String),

    #[error("series is not symmetric: {0}")]
    NotSymmetric(String),

    #[error("catalog parse error at {location}: {message}")]
    CatalogParse { location: String, message: String },

    #[error("catalog is incomplete: {0}")]
    CatalogIncomplete(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),

    #[error("entry `{id}` is not valid for d = {d} (declared maximum {dmax})")]
    OutOfScope { id: String, d: usize, dmax: usize },

    #[error("entry `{0}` is not supported by this operation: {1}")]
    UnsupportedEntry(String, String),

    #[error("interpolation window too small: {0}")]
    WindowTooSmall(String),

    #[error("sample point {point} violates constraint `{constraint}`")]
    ConstraintViolation { point: String, constraint: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
