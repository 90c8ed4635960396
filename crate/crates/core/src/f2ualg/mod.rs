//! Exact linear algebra for graded free complexes over F2[U], `U` in degree −2.
//!
//! Everything here works over polynomials rather than power series. All
//! complexes handled by the crate are finitely generated and the truncated
//! mapping cone is finite, so completing in `U` changes neither homology ranks
//! nor whether a map is zero or surjective.

mod bits;
mod homology;
mod matrix;
mod module;
mod snf;
pub mod truncated;

use thiserror::Error;

pub use bits::BitRow;
pub use homology::{
    class_is_zero, class_of, homology, induced_map, Cancellation, ChainComplex, GeneratorKind, HomologyGenerator,
    HomologyPresentation, InducedMap,
};
pub use matrix::{implied_power, Chain, MonomialMatrix};
pub use module::{GradedModule, TorsionSummand};
pub use snf::{snf_monomial, DiagonalEntry, SmithForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("entry ({row}, {col}) has U-power {given}, gradings imply {implied:?}")]
    Homogeneity { row: usize, col: usize, given: i64, implied: Option<i64> },
    #[error("entry ({row}, {col}) has negative U-power {power}")]
    NegativePower { row: usize, col: usize, power: i64 },
    #[error("entry ({row}, {col}) out of range")]
    IndexOutOfRange { row: usize, col: usize },
    #[error("dimension or grading mismatch")]
    DimensionMismatch,
    #[error("differential does not square to zero")]
    NotSquareZero,
    #[error("map is not a chain map")]
    NotChainMap,
    #[error("element is not a cycle")]
    NotACycle,
    #[error("element is not homogeneous (basis index {index})")]
    InhomogeneousChain { index: usize },
    #[error("U-truncation bound {bound} too small for this element")]
    TruncationTooSmall { bound: u32 },
    #[error("U-truncation at {bound} and its double disagree")]
    TruncationUnstable { bound: u32 },
}
