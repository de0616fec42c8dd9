//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors produced by construction, scheduling and decomposition routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A qubit count fell outside the range supported by the operation.
    #[error("qubit count {n} outside supported range {min}..={max}")]
    QubitCountOutOfRange { n: usize, min: usize, max: usize },

    /// A column index fell outside the range valid for the qubit count.
    #[error("column index {col} out of range {min}..={max} for {n} qubits")]
    ColumnOutOfRange {
        col: usize,
        min: usize,
        max: usize,
        n: usize,
    },

    /// Matrix rows of unequal length, or a row count differing from the
    /// column count.
    #[error("matrix is not square: expected {expected} columns, row {row} has {found}")]
    NotSquare {
        row: usize,
        expected: usize,
        found: usize,
    },

    /// A matrix entry was NaN or infinite.
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    /// Unitarity check failed at the requested tolerance.
    #[error("matrix is not unitary: max |U\u{2020}U - I| = {deviation:.3e} exceeds {tol:.1e}")]
    NotUnitary { deviation: f64, tol: f64 },

    /// Matrix dimension is not a power of two (so it carries no qubit count).
    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    /// Both entries of an elimination pair are zero; there is nothing for a
    /// 2x2 rotation to act on and the caller must skip the slot.
    #[error("nothing to eliminate: both pair entries are zero")]
    NothingToEliminate,

    /// A control-pattern string failed to parse or violated a precondition.
    #[error("invalid gate pattern {pattern:?}: {reason}")]
    InvalidPattern { pattern: String, reason: String },

    /// Two objects that must share a dimension do not.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// The pivot pair of a column's final gate carries almost no norm, which
    /// means earlier eliminations left the column in an unexpected state.
    #[error("degenerate pivot pair in column {col}: norm {norm:.3e}")]
    DegeneratePivot { col: usize, norm: f64 },

    /// The work matrix did not reduce to the identity within tolerance.
    #[error("residual {residual:.3e} exceeds tolerance {tol:.1e} after elimination")]
    ResidualTooLarge { residual: f64, tol: f64 },
}

impl Error {
    fn invalid_pattern(pattern: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidPattern {
            pattern: pattern.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn bad_pattern(pattern: impl std::fmt::Display, reason: impl Into<String>) -> Self {
        Self::invalid_pattern(pattern.to_string(), reason)
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
