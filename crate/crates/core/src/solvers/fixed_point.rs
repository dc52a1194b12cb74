//! Fixed-point iteration based on the diagonal splitting of `A` and `D`.
//!
//! Writing `A = A1 - A2` and `D = D1 - D2` with `A1 = diag(A)` and
//! `D1 = diag(D)`, the iteration solves
//!
//! ```text
//! A1 X_{i+1} + X_{i+1} D1 = X_i C X_i + X_i D2 + A2 X_i + B
//! ```
//!
//! whose left side is entrywise division by `a_ii + d_jj`. Starting from
//! `X_0 = 0` the iterates increase monotonically to the minimal solution.

use super::{estimate_rate, ConvergenceLog, Solution, SolveMethod, SolverError, SolverOptions};
use crate::matrix::DenseMatrix;
use crate::riccati::RiccatiProblem;

const DEFAULT_MAX_ITER: usize = 10_000;

pub fn solve_fixed_point(
    p: &RiccatiProblem,
    opts: &SolverOptions,
) -> Result<Solution, SolverError> {
    opts.validate()?;
    let m = p.m();
    let n = p.n();
    let a = p.a();
    let d = p.d();
    for i in 0..m {
        for j in 0..n {
            let sum = a[(i, i)] + d[(j, j)];
            if sum <= 0.0 {
                return Err(SolverError::IllDefined { i, j, sum });
            }
        }
    }

    // A2 = diag(A) - A and D2 = diag(D) - D hold the off-diagonal parts.
    let mut a2 = a.scale(-1.0);
    for i in 0..m {
        a2[(i, i)] = 0.0;
    }
    let mut d2 = d.scale(-1.0);
    for j in 0..n {
        d2[(j, j)] = 0.0;
    }

    let max_iter = opts.max_iter.unwrap_or(DEFAULT_MAX_ITER);
    let mut x = DenseMatrix::zeros(m, n);
    let mut log = ConvergenceLog::new(SolveMethod::FixedPoint);
    if opts.record_iterates {
        log.iterates = Some(vec![x.clone()]);
    }

    for iter in 1..=max_iter {
        let rhs = x
            .mul(p.c())
            .mul(&x)
            .add(&x.mul(&d2))
            .add(&a2.mul(&x))
            .add(p.b());
        let mut next = rhs;
        for i in 0..m {
            for j in 0..n {
                next[(i, j)] /= a[(i, i)] + d[(j, j)];
            }
        }
        let rel = p.relative_residual(&next);
        log.residual_history.push(rel);
        log.iterations = iter;
        if let Some(iterates) = log.iterates.as_mut() {
            iterates.push(next.clone());
        }
        x = next;
        if rel <= opts.tol {
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
    }

    let residual = log.residual_history.last().copied().unwrap_or(f64::NAN);
    log.rate_estimate = estimate_rate(&log.residual_history);
    Err(SolverError::MaxIterExceeded {
        limit: max_iter,
        residual,
        log: Box::new(log),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_problem() -> RiccatiProblem {
        RiccatiProblem::new(
            DenseMatrix::from_rows(&[&[3.0]]),
            DenseMatrix::from_rows(&[&[1.0]]),
            DenseMatrix::from_rows(&[&[1.0]]),
            DenseMatrix::from_rows(&[&[2.0]]),
        )
        .unwrap()
    }

    #[test]
    fn scalar_agrees_with_quadratic_formula() {
        let p = scalar_problem();
        let opts = SolverOptions::with_method(SolveMethod::FixedPoint);
        let sol = solve_fixed_point(&p, &opts).unwrap();
        // Minimal nonnegative root of x^2 - 5x + 1 = 0.
        let expected = (5.0 - 21.0_f64.sqrt()) / 2.0;
        assert!((sol.phi[(0, 0)] - expected).abs() < 1e-11);
        assert!(sol.residual_phi <= 1e-12);
        assert!(!sol.log.residual_history.is_empty());
    }

    #[test]
    fn zero_b_converges_immediately() {
        let p = RiccatiProblem::new(
            DenseMatrix::identity(2),
            DenseMatrix::zeros(2, 2),
            DenseMatrix::from_rows(&[&[0.5, 0.0], &[0.0, 0.5]]),
            DenseMatrix::identity(2),
        )
        .unwrap();
        let opts = SolverOptions::with_method(SolveMethod::FixedPoint);
        let sol = solve_fixed_point(&p, &opts).unwrap();
        assert_eq!(sol.log.iterations, 1);
        assert_eq!(sol.phi.max_abs(), 0.0);
    }

    #[test]
    fn iterates_increase_monotonically() {
        let p = scalar_problem();
        let mut opts = SolverOptions::with_method(SolveMethod::FixedPoint);
        opts.record_iterates = true;
        let sol = solve_fixed_point(&p, &opts).unwrap();
        let iterates = sol.log.iterates.as_ref().unwrap();
        for w in iterates.windows(2) {
            assert!(w[0].le_entrywise(&w[1], 1e-14));
        }
    }

    #[test]
    fn rejects_nonpositive_denominator() {
        let p = RiccatiProblem::new(
            DenseMatrix::zeros(1, 1),
            DenseMatrix::zeros(1, 1),
            DenseMatrix::zeros(1, 1),
            DenseMatrix::zeros(1, 1),
        )
        .unwrap();
        let opts = SolverOptions::with_method(SolveMethod::FixedPoint);
        assert!(matches!(
            solve_fixed_point(&p, &opts),
            Err(SolverError::IllDefined { .. })
        ));
    }

    #[test]
    fn iteration_limit_is_reported() {
        let p = scalar_problem();
        let mut opts = SolverOptions::with_method(SolveMethod::FixedPoint);
        opts.max_iter = Some(2);
        match solve_fixed_point(&p, &opts) {
            Err(SolverError::MaxIterExceeded { limit, log, .. }) => {
                assert_eq!(limit, 2);
                assert_eq!(log.residual_history.len(), 2);
            }
            other => panic!("expected iteration limit error, got {:?}", other),
        }
    }

    #[test]
    fn empty_problem_returns_empty_solution() {
        let p = RiccatiProblem::new(
            DenseMatrix::zeros(0, 0),
            DenseMatrix::zeros(0, 2),
            DenseMatrix::zeros(2, 0),
            DenseMatrix::identity(2),
        )
        .unwrap();
        let opts = SolverOptions::with_method(SolveMethod::FixedPoint);
        let sol = solve_fixed_point(&p, &opts).unwrap();
        assert_eq!(sol.phi.rows(), 0);
        assert_eq!(sol.phi.cols(), 2);
        assert_eq!(sol.residual_phi, 0.0);
    }
}
