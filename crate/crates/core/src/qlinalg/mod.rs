//! Exact linear algebra over the rationals.
//!
//! Every check in this crate is an exact equality; nothing here takes a tolerance.

mod echelon;
mod mat;
mod rat;
mod sparse;

use thiserror::Error;

pub use echelon::{
    cokernel, cokernel_of_rows, inverse, is_isomorphism, kernel, kernel_with_coordinates, rank, rref_kernel_image, solve, Echelon,
    Kernel, Quotient, RrefSummary,
};
pub use mat::{BasedSet, QMat};
pub use rat::{Rat, RatParseError};
pub use sparse::{SparseEchelon, SparseRow};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch { op: &'static str, left: (usize, usize), right: (usize, usize) },
    #[error("ragged input: expected {expected} entries, found {found}")]
    Ragged { expected: usize, found: usize },
}
