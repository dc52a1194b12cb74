//! Sylvester equation solvers for `P X + X Q = C`.
//!
//! The production path is Bartels-Stewart: reduce both coefficient
//! matrices to real Schur form, then back-substitute block column by
//! block column. A dense Kronecker expansion is kept alongside it as an
//! independent reference and as a fallback for near-singular operators.

use super::schur::{block_eigenvalues, block_starts, real_schur};
use super::{linear_solve, LinalgError, DIMENSION_CAP};
use crate::matrix::DenseMatrix;

/// Relative threshold on `min |lambda_i(P) + mu_j(Q)|` below which the
/// Sylvester operator is reported as near singular.
const SEPARATION_REL_TOL: f64 = 1e-12;

fn block_sizes(t: &DenseMatrix) -> Vec<(usize, usize)> {
    let n = t.rows();
    block_starts(t)
        .into_iter()
        .map(|s| {
            let size = if s + 1 < n && t[(s + 1, s)] != 0.0 { 2 } else { 1 };
            (s, size)
        })
        .collect()
}

/// Solves the small block equation `Tp_ii Y + Y Tq_jj = R` with blocks of
/// size at most two, through its Kronecker expansion.
fn solve_block(
    tp: &DenseMatrix,
    tq: &DenseMatrix,
    rhs: &DenseMatrix,
    min_sep: f64,
) -> Result<DenseMatrix, LinalgError> {
    let si = tp.rows();
    let sj = tq.rows();
    let dim = si * sj;
    let mut op = DenseMatrix::zeros(dim, dim);
    for ri in 0..si {
        for ci in 0..sj {
            for rj in 0..si {
                for cj in 0..sj {
                    let mut v = 0.0;
                    if ci == cj {
                        v += tp[(ri, rj)];
                    }
                    if ri == rj {
                        v += tq[(cj, ci)];
                    }
                    op[(ri * sj + ci, rj * sj + cj)] = v;
                }
            }
        }
    }
    let mut b = DenseMatrix::zeros(dim, 1);
    for ri in 0..si {
        for ci in 0..sj {
            b[(ri * sj + ci, 0)] = rhs[(ri, ci)];
        }
    }
    let x = linear_solve(&op, &b).map_err(|_| LinalgError::NearSingularOperator {
        min_separation: min_sep,
    })?;
    let mut y = DenseMatrix::zeros(si, sj);
    for ri in 0..si {
        for ci in 0..sj {
            y[(ri, ci)] = x[(ri * sj + ci, 0)];
        }
    }
    Ok(y)
}

/// Solves `P X + X Q = C` by Bartels-Stewart.
///
/// Returns [`LinalgError::NearSingularOperator`] when some eigenvalue sum
/// `lambda_i(P) + mu_j(Q)` falls below `1e-12` relative to the coefficient
/// scale, which makes the operator numerically singular.
pub fn solve_sylvester(
    p: &DenseMatrix,
    q: &DenseMatrix,
    c: &DenseMatrix,
) -> Result<DenseMatrix, LinalgError> {
    assert!(p.is_square() && q.is_square(), "coefficients must be square");
    assert_eq!(c.rows(), p.rows(), "right-hand side row count");
    assert_eq!(c.cols(), q.rows(), "right-hand side column count");
    let mp = p.rows();
    let nq = q.rows();
    if mp == 0 || nq == 0 {
        return Ok(DenseMatrix::zeros(mp, nq));
    }

    let sp = real_schur(p)?;
    let sq = real_schur(q)?;
    let tq = &sq.t;
    let v = &sq.q;

    let lp = block_eigenvalues(&sp.t);
    let lq = block_eigenvalues(tq);
    let scale = p.norm_inf().max(q.norm_inf()).max(1.0);
    let mut min_sep = f64::INFINITY;
    for a in &lp {
        for b in &lq {
            min_sep = min_sep.min((a + b).norm());
        }
    }
    if min_sep < SEPARATION_REL_TOL * scale {
        return Err(LinalgError::NearSingularOperator {
            min_separation: min_sep,
        });
    }

    // U^T (P X + X Q) V = Tp Y + Y Tq = U^T C V with Y = U^T X V.
    let ct = sp.q.transpose().mul(c).mul(v);
    let mut y = DenseMatrix::zeros(mp, nq);
    let row_blocks = block_sizes(&sp.t);
    let col_blocks = block_sizes(tq);

    for &(jc, sj) in &col_blocks {
        for &(ir, si) in row_blocks.iter().rev() {
            let mut rhs = ct.block(ir, ir + si, jc, jc + sj);
            // Contributions of later row blocks through Tp.
            for &(kr, sk) in &row_blocks {
                if kr <= ir {
                    continue;
                }
                let tp_ik = sp.t.block(ir, ir + si, kr, kr + sk);
                let y_kj = y.block(kr, kr + sk, jc, jc + sj);
                rhs = rhs.sub(&tp_ik.mul(&y_kj));
            }
            // Contributions of earlier column blocks through Tq.
            for &(kc, sk) in &col_blocks {
                if kc >= jc {
                    continue;
                }
                let y_ik = y.block(ir, ir + si, kc, kc + sk);
                let tq_kj = tq.block(kc, kc + sk, jc, jc + sj);
                rhs = rhs.sub(&y_ik.mul(&tq_kj));
            }
            let tp_ii = sp.t.block(ir, ir + si, ir, ir + si);
            let tq_jj = tq.block(jc, jc + sj, jc, jc + sj);
            let y_ij = solve_block(&tp_ii, &tq_jj, &rhs, min_sep)?;
            y.set_block(ir, jc, &y_ij);
        }
    }

    Ok(sp.q.mul(&y).mul(&v.transpose()))
}

/// The dense operator `P (x) I + I (x) Q^T` of the Sylvester map
/// `X -> P X + X Q` acting on row-major `vec(X)`.
pub fn sylvester_kron_operator(p: &DenseMatrix, q: &DenseMatrix) -> DenseMatrix {
    assert!(p.is_square() && q.is_square(), "coefficients must be square");
    let mp = p.rows();
    let nq = q.rows();
    let dim = mp * nq;
    assert!(dim <= DIMENSION_CAP, "Kronecker system too large");
    let mut op = DenseMatrix::zeros(dim, dim);
    for r in 0..mp {
        for cc in 0..nq {
            let row = r * nq + cc;
            for k in 0..mp {
                op[(row, k * nq + cc)] += p[(r, k)];
            }
            for k in 0..nq {
                op[(row, r * nq + k)] += q[(k, cc)];
            }
        }
    }
    op
}

/// Solves `P X + X Q = C` through the dense Kronecker system with
/// row-major `vec`.
///
/// Quadratic memory in the unknown count; intended for small systems and
/// as an independent check on [`solve_sylvester`].
pub fn sylvester_kron_solve(
    p: &DenseMatrix,
    q: &DenseMatrix,
    c: &DenseMatrix,
) -> Result<DenseMatrix, LinalgError> {
    assert_eq!(c.rows(), p.rows(), "right-hand side row count");
    assert_eq!(c.cols(), q.rows(), "right-hand side column count");
    let mp = p.rows();
    let nq = q.rows();
    let dim = mp * nq;
    if dim == 0 {
        return Ok(DenseMatrix::zeros(mp, nq));
    }

    let op = sylvester_kron_operator(p, q);
    let mut b = DenseMatrix::zeros(dim, 1);
    for r in 0..mp {
        for cc in 0..nq {
            b[(r * nq + cc, 0)] = c[(r, cc)];
        }
    }
    let x = linear_solve(&op, &b)?;
    let mut out = DenseMatrix::zeros(mp, nq);
    for r in 0..mp {
        for cc in 0..nq {
            out[(r, cc)] = x[(r * nq + cc, 0)];
        }
    }
    Ok(out)
}
