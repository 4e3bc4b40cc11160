use thiserror::Error;

/// Errors raised by the library.
///
/// Verification outcomes (a spectrum that does not certify, a bijection that
/// breaks) are reported through the report types of the relevant module, not
/// through this enum.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("insufficient vertices: {0}")]
    InsufficientVertices(String),

    #[error("structure violation: {0}")]
    StructureViolation(String),

    #[error("instance too large: {0}")]
    TooLarge(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::error::Error::InvalidInput(format!($($arg)*))
    };
}

pub(crate) use invalid;
