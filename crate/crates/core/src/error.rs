use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Operand shapes are not conformable for `op`.
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    /// A matrix, vector or tensor that must be nonzero was identically zero.
    ZeroInput(&'static str),
    /// Tensor mode outside `1..=3`.
    InvalidMode(usize),
    /// Entry data contained NaN or infinity.
    NonFinite(&'static str),
    InvalidParameter(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { op, left, right } => write!(
                f,
                "{op}: dimension mismatch between {}x{} and {}x{}",
                left.0, left.1, right.0, right.1
            ),
            Error::ZeroInput(what) => write!(f, "{what}: input is identically zero"),
            Error::InvalidMode(mode) => {
                write!(f, "invalid tensor mode {mode} (expected 1, 2 or 3)")
            }
            Error::NonFinite(what) => write!(f, "{what}: non-finite entry"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
        }
    }
}

impl core::error::Error for Error {}
