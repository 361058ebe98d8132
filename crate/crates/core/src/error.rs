use thiserror::Error;

/// Errors raised by the geometry kernel.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QigError {
    #[error("NotHermitian: asymmetry {asymmetry:.3e} exceeds bound {bound:.3e}")]
    NotHermitian { asymmetry: f64, bound: f64 },

    #[error("NotPositiveDefinite: eigenvalue {min_eigenvalue:.3e} below floor {floor:.3e}")]
    NotPositiveDefinite { min_eigenvalue: f64, floor: f64 },

    #[error("NonPositiveArgument: {0} must be strictly positive")]
    NonPositiveArgument(f64),

    #[error("TraceNotOne: trace {0}")]
    TraceNotOne(f64),

    #[error("Degenerate: eigenvalue {min_eigenvalue:.3e} below floor {floor:.3e}")]
    Degenerate { min_eigenvalue: f64, floor: f64 },

    #[error("DimensionMismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("InvalidDimension: {0} (need 2 <= n <= {max})", max = crate::spectra::MAX_DIM)]
    InvalidDimension(usize),

    #[error("NotSquare: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("NotCentered: expectation {0:.3e} is not zero")]
    NotCentered(f64),

    #[error("NotTraceless: trace {0:.3e} is not zero")]
    NotTraceless(f64),

    #[error("OutOfRange: {name} = {value} outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("IndexOutOfRange: {index} not below {len}")]
    IndexOutOfRange { index: usize, len: usize },
}

impl QigError {
    /// Short invariant name, the leading token of the display message.
    pub fn kind(&self) -> &'static str {
        match self {
            QigError::NotHermitian { .. } => "NotHermitian",
            QigError::NotPositiveDefinite { .. } => "NotPositiveDefinite",
            QigError::NonPositiveArgument(_) => "NonPositiveArgument",
            QigError::TraceNotOne(_) => "TraceNotOne",
            QigError::Degenerate { .. } => "Degenerate",
            QigError::DimensionMismatch { .. } => "DimensionMismatch",
            QigError::InvalidDimension(_) => "InvalidDimension",
            QigError::NotSquare { .. } => "NotSquare",
            QigError::NotCentered(_) => "NotCentered",
            QigError::NotTraceless(_) => "NotTraceless",
            QigError::OutOfRange { .. } => "OutOfRange",
            QigError::IndexOutOfRange { .. } => "IndexOutOfRange",
        }
    }
}

pub type Result<T> = std::result::Result<T, QigError>;
