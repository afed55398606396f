use thiserror::Error;

/// Errors raised by the algebraic engine.
///
/// Verification failures (a differential that does not square to zero, a
/// morphism that does not intertwine) are reported through report types, not
/// through this enum.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("argument error: {0}")]
    Argument(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid complex: d^2 != 0 at degree {degree}")]
    InvalidComplex { degree: i32 },
    #[error("invalid structure: {0}")]
    Invalid(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("obstruction infeasible at weight {weight}, degree {degree}: {detail}")]
    Obstruction {
        weight: u32,
        degree: i32,
        detail: String,
    },
}

impl Error {
    /// True for failures caused by the finite degree window or weight cutoff.
    pub fn is_infeasibility(&self) -> bool {
        matches!(self, Error::WindowTooSmall(_) | Error::Obstruction { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
