//! Self-contained dense linear-algebra kernels.
//!
//! Provides the factorizations the solver layer is built on: partially and
//! completely pivoted Gaussian elimination, Householder Hessenberg reduction,
//! the Francis double-shift QR iteration for the real Schur form, orthogonal
//! reordering of Schur blocks, a Bartels-Stewart Sylvester solver, spectral
//! radius, and nonnegative null-vector extraction for singular matrices.
//!
//! All routines target desk-scale problems; the eigenvalue path asserts a
//! dimension cap of 512.

mod lu;
mod nullvec;
mod ordschur;
mod schur;
mod spectral;
mod sylvester;

pub use lu::{complete_pivot_rank, linear_solve, linear_solve_with_tol, LuFactors};
pub use nullvec::{nonneg_null_vector, NullSide};
pub use ordschur::{ordered_real_schur, reorder_select};
pub use schur::{block_starts, eigenvalues, hessenberg, real_schur, SchurForm};
pub(crate) use schur::block_eigenvalues;
pub use spectral::spectral_radius;
pub use sylvester::{solve_sylvester, sylvester_kron_operator, sylvester_kron_solve};

use thiserror::Error;

/// Relative threshold under which a pivot or eigenvalue counts as zero,
/// scaled by the largest absolute entry of the matrix at hand.
pub const SINGULARITY_REL_TOL: f64 = 1e-12;

/// Hard cap on matrix dimension for the eigenvalue and Schur routines.
pub const DIMENSION_CAP: usize = 512;

/// Errors reported by the dense kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix entries must be finite")]
    NotFinite,
    #[error("shape mismatch: {context}")]
    ShapeMismatch { context: &'static str },
    #[error("matrix is singular to working precision")]
    SingularMatrix,
    #[error("eigenvalue iteration failed to converge after {iterations} steps")]
    NoConvergence { iterations: usize },
    #[error("orthogonal reordering of Schur blocks failed")]
    ReorderFailure,
    #[error("Sylvester operator is near singular (minimum eigenvalue separation {min_separation:.3e})")]
    NearSingularOperator { min_separation: f64 },
    #[error("null space dimension is {found}, expected 1")]
    NullSpaceDimension { found: usize },
    #[error("null vector has no nonnegative representative")]
    SignFailure,
}
