//! Exact integer and rational algebra: dense matrices, Smith normal form, and
//! mixed modules `(Z^m + Q^n) / <relations>` with kernels, cokernels and
//! canonical classification.
//!
//! Real coefficient groups are modelled exactly: `R` by `Q` and `R/Z` by `Q/Z`.

mod abgroup;
mod matrix;
mod mixed;
mod snf;

pub use abgroup::AbGroupClass;
pub use matrix::{
    complete_basis, independent_subset, is_unimodular, rat, ratio, Int, IntMatrix, Matrix, Rat, RatMatrix,
};
pub use mixed::{homology, subquotient, DirectSum, Generators, Hom, MixedModule, RelationSpan, Subquotient};
pub use snf::{column_lattice_basis, integer_kernel, integer_solve, smith_normal_form, Smith};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactAlgError {
    #[error("map is not well defined: {0}")]
    NotWellDefined(String),
    #[error("vector of length {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("lattice coordinates of a relation must be integers")]
    NonIntegralLattice,
    #[error("{rows}x{cols} matrix cannot map a {src}-dimensional ambient to a {dst}-dimensional one")]
    ShapeMismatch { rows: usize, cols: usize, src: usize, dst: usize },
}
