//! Dense matrices over `f64` or `Complex64` and the matrix exponential.
//!
//! The exponential follows the scaling-and-squaring method with diagonal
//! Padé approximants of degree 3, 5, 7, 9 or 13, chosen from the 1-norm of the
//! input (Higham, 2005). The same code path serves real generators of
//! permutation walks and complex Lie-algebra increments.

mod dense;
mod expm;

pub use dense::{DenseMatrix, Scalar};
pub use expm::{expm, expm_into, ExpmWorkspace};

use thiserror::Error;

/// Failures of the dense kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatexpError {
    /// The input contains NaN or infinite entries.
    #[error("matrix has non-finite entries")]
    NonFinite,
    /// The norm is so large that the result would overflow.
    #[error("matrix norm {norm:e} too large for the exponential")]
    Overflow { norm: f64 },
    /// A linear solve met an exactly singular pivot.
    #[error("singular matrix in linear solve (pivot column {column})")]
    Singular { column: usize },
    /// Two operands have incompatible dimensions.
    #[error("dimension mismatch: {left} vs {right}")]
    Dimension { left: usize, right: usize },
}
