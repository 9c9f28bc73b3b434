use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("grid dimensions must be positive, got {width}x{height}")]
    EmptyGrid { width: usize, height: usize },

    #[error("expected {expected} values for the grid, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("sampling mask selects no bins")]
    EmptyMask,

    #[error("measurement mask does not match the operator mask")]
    MaskMismatch,

    #[error("measurement data is nonzero at unselected bin {index}")]
    UnmaskedData { index: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "target fraction {target} is unreachable: a single radial line already covers {minimum}"
    )]
    UnreachableFraction { target: f64, minimum: f64 },

    #[error("reference image is all zero")]
    ZeroReference,

    #[error("{solver}: non-finite iterate at iteration {iteration}")]
    NonFiniteIterate {
        solver: &'static str,
        iteration: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
