//! Gaussian elimination: partially pivoted LU for linear solves and a
//! completely pivoted variant for numerical rank decisions.

use super::{LinalgError, SINGULARITY_REL_TOL};
use crate::matrix::DenseMatrix;

/// LU factorization with partial pivoting, `P * M = L * U`.
///
/// `L` (unit lower) and `U` share the `lu` storage; `perm` maps factored row
/// index to original row index.
#[derive(Debug, Clone)]
pub struct LuFactors {
    lu: DenseMatrix,
    perm: Vec<usize>,
    max_pivot: f64,
    min_pivot: f64,
}

impl LuFactors {
    /// Factors a square matrix. Pivots with absolute value at or below
    /// `rel_tol * max_abs(m)` are treated as zero.
    pub fn factor(m: &DenseMatrix, rel_tol: f64) -> Result<Self, LinalgError> {
        if !m.is_square() {
            return Err(LinalgError::ShapeMismatch {
                context: "LU requires a square matrix",
            });
        }
        let n = m.rows();
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let threshold = rel_tol * m.max_abs();
        let mut max_pivot: f64 = 0.0;
        let mut min_pivot = f64::INFINITY;

        for k in 0..n {
            let mut best = k;
            let mut best_val = lu[(k, k)].abs();
            for i in k + 1..n {
                let v = lu[(i, k)].abs();
                if v > best_val {
                    best = i;
                    best_val = v;
                }
            }
            if best_val <= threshold {
                return Err(LinalgError::SingularMatrix);
            }
            if best != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(best, j)];
                    lu[(best, j)] = tmp;
                }
                perm.swap(k, best);
            }
            let pivot = lu[(k, k)];
            max_pivot = max_pivot.max(pivot.abs());
            min_pivot = min_pivot.min(pivot.abs());
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                if factor != 0.0 {
                    for j in k + 1..n {
                        let v = lu[(k, j)];
                        lu[(i, j)] -= factor * v;
                    }
                }
            }
        }
        Ok(LuFactors {
            lu,
            perm,
            max_pivot,
            min_pivot,
        })
    }

    /// Solves `M x = b` for one right-hand side.
    pub fn solve_vec(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.rows();
        assert_eq!(b.len(), n, "right-hand side length mismatch");
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        x
    }

    /// Solves `M X = B` column by column.
    pub fn solve_mat(&self, b: &DenseMatrix) -> DenseMatrix {
        let n = self.lu.rows();
        assert_eq!(b.rows(), n, "right-hand side row mismatch");
        let mut out = DenseMatrix::zeros(n, b.cols());
        for j in 0..b.cols() {
            let col = self.solve_vec(&b.column(j));
            for i in 0..n {
                out[(i, j)] = col[i];
            }
        }
        out
    }

    /// Ratio of largest to smallest pivot magnitude; a crude conditioning
    /// estimate used in diagnostics.
    pub fn pivot_ratio(&self) -> f64 {
        if self.min_pivot == 0.0 {
            f64::INFINITY
        } else {
            self.max_pivot / self.min_pivot
        }
    }
}

/// Solves `M X = RHS` with the default singularity threshold.
pub fn linear_solve(m: &DenseMatrix, rhs: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
    linear_solve_with_tol(m, rhs, SINGULARITY_REL_TOL)
}

/// Solves `M X = RHS` with an explicit relative pivot threshold.
pub fn linear_solve_with_tol(
    m: &DenseMatrix,
    rhs: &DenseMatrix,
    rel_tol: f64,
) -> Result<DenseMatrix, LinalgError> {
    if m.rows() != rhs.rows() {
        return Err(LinalgError::ShapeMismatch {
            context: "right-hand side rows must match matrix rows",
        });
    }
    if m.rows() == 0 {
        return Ok(DenseMatrix::zeros(0, rhs.cols()));
    }
    Ok(LuFactors::factor(m, rel_tol)?.solve_mat(rhs))
}

/// Numerical rank via Gaussian elimination with complete pivoting.
///
/// A pivot counts as nonzero while its magnitude exceeds
/// `rel_tol * max_abs(m)`.
pub fn complete_pivot_rank(m: &DenseMatrix, rel_tol: f64) -> usize {
    let rows = m.rows();
    let cols = m.cols();
    let threshold = rel_tol * m.max_abs();
    if m.max_abs() == 0.0 {
        return 0;
    }
    let mut work = m.clone();
    let steps = rows.min(cols);
    let mut rank = 0;
    let mut row_perm: Vec<usize> = (0..rows).collect();
    let mut col_perm: Vec<usize> = (0..cols).collect();

    for k in 0..steps {
        let mut best = (k, k);
        let mut best_val = 0.0;
        for i in k..rows {
            for j in k..cols {
                let v = work[(row_perm[i], col_perm[j])].abs();
                if v > best_val {
                    best = (i, j);
                    best_val = v;
                }
            }
        }
        if best_val <= threshold {
            break;
        }
        row_perm.swap(k, best.0);
        col_perm.swap(k, best.1);
        rank += 1;
        let pr = row_perm[k];
        let pc = col_perm[k];
        let pivot = work[(pr, pc)];
        for i in k + 1..rows {
            let ri = row_perm[i];
            let factor = work[(ri, pc)] / pivot;
            if factor != 0.0 {
                for j in k..cols {
                    let cj = col_perm[j];
                    let v = work[(pr, cj)];
                    work[(ri, cj)] -= factor * v;
                }
            }
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_identity() {
        let i = DenseMatrix::identity(3);
        let b = DenseMatrix::from_rows(&[&[1.0], &[2.0], &[3.0]]);
        let x = linear_solve(&i, &b).unwrap();
        assert!(x.approx_eq(&b, 1e-15));
    }

    #[test]
    fn solve_scaled_identity() {
        let m = DenseMatrix::identity(2).scale(2.0);
        let b = DenseMatrix::from_rows(&[&[2.0, 4.0], &[6.0, 8.0]]);
        let x = linear_solve(&m, &b).unwrap();
        let expected = DenseMatrix::from_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        assert!(x.approx_eq(&expected, 1e-15));
    }

    #[test]
    fn solve_general_residual() {
        let m = DenseMatrix::from_rows(&[&[4.0, 1.0, 0.0], &[1.0, 3.0, -1.0], &[0.0, -1.0, 5.0]]);
        let b = DenseMatrix::from_rows(&[&[1.0], &[-2.0], &[0.5]]);
        let x = linear_solve(&m, &b).unwrap();
        assert!(m.mul(&x).approx_eq(&b, 1e-12));
    }

    #[test]
    fn singular_detected() {
        let m = DenseMatrix::from_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        let b = DenseMatrix::from_rows(&[&[1.0], &[1.0]]);
        assert_eq!(linear_solve(&m, &b), Err(LinalgError::SingularMatrix));
    }

    #[test]
    fn pivoting_handles_zero_leading_entry() {
        let m = DenseMatrix::from_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let b = DenseMatrix::from_rows(&[&[2.0], &[3.0]]);
        let x = linear_solve(&m, &b).unwrap();
        assert!((x[(0, 0)] - 3.0).abs() < 1e-15);
        assert!((x[(1, 0)] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rank_full_and_deficient() {
        let full = DenseMatrix::from_rows(&[&[1.0, 0.0], &[0.0, 2.0]]);
        assert_eq!(complete_pivot_rank(&full, 1e-10), 2);

        let deficient = DenseMatrix::from_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert_eq!(complete_pivot_rank(&deficient, 1e-10), 1);

        let zero = DenseMatrix::zeros(3, 3);
        assert_eq!(complete_pivot_rank(&zero, 1e-10), 0);
    }

    #[test]
    fn rank_rectangular() {
        let m = DenseMatrix::from_rows(&[&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]]);
        assert_eq!(complete_pivot_rank(&m, 1e-10), 1);
    }
}
