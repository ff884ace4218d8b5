//! Dense vectors, quadratic norms and their duals, and Bregman divergences
//! of quadratic distance-generating functions.

mod bregman;
mod matrix;
mod norm;
mod vector;

pub use bregman::{bregman, BregmanGenerator};
pub use matrix::Matrix;
pub use norm::{QuadraticNorm, SPD_PIVOT_RTOL, SYMMETRY_RTOL};
pub use vector::Vector;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty vector or matrix")]
    Empty,
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("matrix is not positive definite (pivot {pivot})")]
    NotPositiveDefinite { pivot: usize },
    #[error("Bregman scale t = {0} outside (0, 1]")]
    InvalidScale(f64),
}

/// Convenience wrappers mirroring the free-function vocabulary.
pub fn primal_norm<T: crate::Scalar>(x: &Vector<T>, n: &QuadraticNorm<T>) -> Result<T, NumError> {
    n.primal_norm(x)
}

pub fn dual_norm<T: crate::Scalar>(u: &Vector<T>, n: &QuadraticNorm<T>) -> Result<T, NumError> {
    n.dual_norm(u)
}

pub fn apply_inverse<T: crate::Scalar>(
    u: &Vector<T>,
    n: &QuadraticNorm<T>,
) -> Result<Vector<T>, NumError> {
    n.apply_inverse(u)
}
