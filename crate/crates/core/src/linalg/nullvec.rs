//! Extraction of nonnegative null vectors from singular matrices.
//!
//! The intended inputs are singular M-matrices, whose one-dimensional
//! null spaces admit a nonnegative basis vector. The vector is read off
//! an ordered Schur form of the negated matrix, where the zero eigenvalue
//! sits in the leading position.

use super::lu::complete_pivot_rank;
use super::ordschur::ordered_real_schur;
use super::LinalgError;
use crate::matrix::DenseMatrix;

/// Entries above this magnitude below zero disqualify the vector; smaller
/// negative entries are treated as roundoff and clamped.
const CLAMP_TOL: f64 = 1e-12;

/// Which null space of the matrix to extract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NullSide {
    /// Vector `v` with `M v = 0`.
    Right,
    /// Vector `u` with `u^T M = 0`.
    Left,
}

/// Nonnegative null vector of `m`, normalized to unit 1-norm.
///
/// Requires the null space to be exactly one-dimensional at the given
/// rank tolerance; otherwise [`LinalgError::NullSpaceDimension`] reports
/// the observed dimension. A genuinely mixed-sign null vector produces
/// [`LinalgError::SignFailure`].
pub fn nonneg_null_vector(
    m: &DenseMatrix,
    side: NullSide,
    rank_tol: f64,
) -> Result<Vec<f64>, LinalgError> {
    assert!(m.is_square(), "null vector extraction needs a square matrix");
    assert!(m.rows() > 0, "matrix must be nonempty");
    let work = match side {
        NullSide::Right => m.clone(),
        NullSide::Left => m.transpose(),
    };
    let n = work.rows();
    let rank = complete_pivot_rank(&work, rank_tol);
    let found = n - rank;
    if found != 1 {
        return Err(LinalgError::NullSpaceDimension { found });
    }

    // The zero eigenvalue of -work has the largest real part, so the
    // leading Schur vector after descending reordering spans the null
    // space (unit 2-norm by orthogonality).
    let neg = work.scale(-1.0);
    let sf = ordered_real_schur(&neg)?;
    let mut v: Vec<f64> = (0..n).map(|i| sf.q[(i, 0)]).collect();

    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        for x in &mut v {
            *x = -*x;
        }
    }
    for x in &mut v {
        if *x < -CLAMP_TOL {
            return Err(LinalgError::SignFailure);
        }
        if *x < 0.0 {
            *x = 0.0;
        }
    }
    let sum: f64 = v.iter().sum();
    if sum <= 0.0 {
        return Err(LinalgError::SignFailure);
    }
    for x in &mut v {
        *x /= sum;
    }
    Ok(v)
}
