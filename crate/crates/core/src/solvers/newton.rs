//! Newton's method for the Riccati equation.
//!
//! Each step linearizes the residual at the current iterate and solves
//!
//! ```text
//! (A - X_k C) X_{k+1} + X_{k+1} (D - C X_k) = B - X_k C X_k
//! ```
//!
//! by Bartels-Stewart. From `X_0 = 0` the iterates increase to the
//! minimal solution. The run stops when the relative update step drops
//! below the tolerance, which keeps full accuracy even when the zero
//! eigenvalue is defective and the residual alone stalls near `tol`
//! while the error is still of order `sqrt(tol)`.

use super::{estimate_rate, relative_step, ConvergenceLog, Solution, SolveMethod, SolverError, SolverOptions};
use crate::linalg::{solve_sylvester, sylvester_kron_operator, LinalgError, LuFactors};
use crate::matrix::DenseMatrix;
use crate::riccati::RiccatiProblem;

const DEFAULT_MAX_ITER: usize = 100;
/// Largest unknown count `m * n` for which a singular correction operator
/// falls back to a dense pivoted Kronecker solve instead of failing.
const KRON_FALLBACK_MAX_DIM: usize = 64;

fn kron_fallback(
    ac: &DenseMatrix,
    dc: &DenseMatrix,
    rhs: &DenseMatrix,
    min_separation: f64,
    log: &mut ConvergenceLog,
) -> Result<DenseMatrix, SolverError> {
    let m = rhs.rows();
    let n = rhs.cols();
    let op = sylvester_kron_operator(ac, dc);
    let lu = LuFactors::factor(&op, 0.0)
        .map_err(|_| SolverError::NearSingularOperator { min_separation })?;
    log.notes.push(format!(
        "correction operator near singular (separation {:.3e}); dense Kronecker fallback, pivot ratio {:.3e}",
        min_separation,
        lu.pivot_ratio()
    ));
    let mut b = vec![0.0; m * n];
    for i in 0..m {
        for j in 0..n {
            b[i * n + j] = rhs[(i, j)];
        }
    }
    let x = lu.solve_vec(&b);
    let mut out = DenseMatrix::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            out[(i, j)] = x[i * n + j];
        }
    }
    Ok(out)
}

pub fn solve_newton(p: &RiccatiProblem, opts: &SolverOptions) -> Result<Solution, SolverError> {
    opts.validate()?;
    let m = p.m();
    let n = p.n();
    let max_iter = opts.max_iter.unwrap_or(DEFAULT_MAX_ITER);
    let mut x = DenseMatrix::zeros(m, n);
    let mut log = ConvergenceLog::new(SolveMethod::Newton);
    if opts.record_iterates {
        log.iterates = Some(vec![x.clone()]);
    }

    let mut final_rel = None;
    for iter in 1..=max_iter {
        // The step-1 operator is the pair (A, D) itself; a singularity
        // there surfaces the nonsingularity precondition on I (x) A + D^T (x) I.
        let ac = p.a().sub(&x.mul(p.c()));
        let dc = p.d().sub(&p.c().mul(&x));
        let rhs = p.b().sub(&x.mul(p.c()).mul(&x));
        let next = match solve_sylvester(&ac, &dc, &rhs) {
            Ok(z) => z,
            Err(LinalgError::NearSingularOperator { min_separation }) => {
                if m * n > KRON_FALLBACK_MAX_DIM {
                    return Err(SolverError::NearSingularOperator { min_separation });
                }
                match kron_fallback(&ac, &dc, &rhs, min_separation, &mut log) {
                    Ok(z) => z,
                    // An iterate can land exactly on a solution whose
                    // linearization is exactly singular (defective double
                    // root). The singular system is then consistent and
                    // the iterate itself is its stationary solution.
                    Err(err) => {
                        if p.relative_residual(&x) <= f64::EPSILON {
                            log.notes.push(
                                "linearization singular at a zero-residual iterate; \
                                 keeping the iterate"
                                    .into(),
                            );
                            x.clone()
                        } else {
                            return Err(err);
                        }
                    }
                }
            }
            Err(e) => return Err(e.into()),
        };
        let rel = p.relative_residual(&next);
        let step = relative_step(&next, &x);
        log.residual_history.push(rel);
        log.iterations = iter;
        if let Some(iterates) = log.iterates.as_mut() {
            iterates.push(next.clone());
        }
        x = next;
        if step <= opts.tol {
            final_rel = Some(rel);
            break;
        }
    }
    if let Some(rel) = final_rel {
        log.rate_estimate = estimate_rate(&log.residual_history);
        let r = p.d().sub(&p.c().mul(&x));
        return Ok(Solution {
            phi: x,
            psi: None,
            r,
            s: None,
            residual_phi: rel,
            residual_psi: None,
            log,
        });
    }

    let residual = log.residual_history.last().copied().unwrap_or(f64::NAN);
    log.rate_estimate = estimate_rate(&log.residual_history);
    Err(SolverError::MaxIterExceeded {
        limit: max_iter,
        residual,
        log: Box::new(log),
    })
}
