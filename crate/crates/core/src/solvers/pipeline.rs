//! The orchestrated entry point: classify `K`, strip zero rows, run the
//! selected method, recover the dual factor, and annotate the solution
//! with the structural analysis of the singular cases.

use crate::analysis::{self, CaseLabel};
use crate::matrix::DenseMatrix;
use crate::mmatrix::categorize;
use crate::riccati::RiccatiProblem;

use super::{
    solve_doubling, solve_fixed_point, solve_newton, solve_schur, ConvergenceLog, Solution,
    SolveMethod, SolverError, SolverOptions,
};

/// Accepted relative defect in the coupling identity check.
const FACTORIZATION_TOL: f64 = 1e-8;

fn dispatch(p: &RiccatiProblem, opts: &SolverOptions) -> Result<Solution, SolverError> {
    match opts.method {
        SolveMethod::FixedPoint => solve_fixed_point(p, opts),
        SolveMethod::Newton => solve_newton(p, opts),
        SolveMethod::Doubling => solve_doubling(p, opts),
        SolveMethod::Schur => solve_schur(p, opts),
        SolveMethod::ModifiedSchur => Err(SolverError::UnimplementedMethod),
    }
}

fn describe_case(case: CaseLabel) -> String {
    match case {
        CaseLabel::NonsingularK => "K nonsingular".into(),
        CaseLabel::DegenerateNullSpace => "K singular with a degenerate null space".into(),
        other => format!("singular regular K, case {other}"),
    }
}

/// Solves for the minimal nonnegative solution with the full pipeline.
///
/// The steps are: categorize `K` and reject problems without a minimal
/// solution theory, remove zero rows, run the selected method on the
/// reduced problem, embed the result, solve the dual equation the same
/// way for `Psi`, verify the coupling identity, and classify the
/// problem. Findings land in the solution log.
///
/// A failure in the dual solve is downgraded to a log note with
/// `psi = None`; the primal solution is still returned.
pub fn solve(p: &RiccatiProblem, opts: &SolverOptions) -> Result<Solution, SolverError> {
    opts.validate()?;
    if opts.method == SolveMethod::ModifiedSchur {
        return Err(SolverError::UnimplementedMethod);
    }
    let n = p.n();
    let m = p.m();
    if n + m == 0 {
        let mut log = ConvergenceLog::new(opts.method);
        log.residual_history.push(0.0);
        log.notes.push("empty problem; nothing to solve".into());
        return Ok(Solution {
            phi: DenseMatrix::zeros(0, 0),
            psi: Some(DenseMatrix::zeros(0, 0)),
            r: DenseMatrix::zeros(0, 0),
            s: Some(DenseMatrix::zeros(0, 0)),
            residual_phi: 0.0,
            residual_psi: Some(0.0),
            log,
        });
    }

    let kind = categorize(&p.k())?;
    if !kind.is_m {
        return Err(SolverError::NotMMatrix);
    }
    if !kind.regular {
        return Err(SolverError::NotRegular);
    }

    let reduction = p.reduce_zero_diagonal()?;
    let mut inner = dispatch(&reduction.problem, opts)?;
    let reduced_psi = inner.psi.take();
    let mut log = inner.log;
    if reduction.r > 0 {
        log.notes.push(format!(
            "removed {} zero row(s) before solving; those rows of Phi are exact zeros",
            reduction.r
        ));
    }
    let phi = p.embed_solution(&reduction, &inner.phi);
    let residual_phi = p.relative_residual(&phi);

    let dual = p.dual();
    let psi = if opts.method == SolveMethod::Doubling && reduction.r == 0 {
        // The doubling iteration already produced the dual limit for the
        // unreduced problem; with zero rows removed the reduced dual limit
        // does not embed directly, so the dual is solved on its own.
        reduced_psi
    } else {
        let dual_run = dual.reduce_zero_diagonal().map_err(SolverError::from).and_then(
            |dual_reduction| {
                dispatch(&dual_reduction.problem, opts)
                    .map(|dual_sol| dual.embed_solution(&dual_reduction, &dual_sol.phi))
            },
        );
        match dual_run {
            Ok(y) => Some(y),
            Err(err) => {
                log.notes.push(format!("dual solve failed: {err}; Psi unavailable"));
                None
            }
        }
    };
    let residual_psi = psi.as_ref().map(|y| dual.relative_residual(y));

    let r = p.d().sub(&p.c().mul(&phi));
    let s = psi.as_ref().map(|y| p.a().sub(&p.b().mul(y)));

    if let Some(y) = psi.as_ref() {
        let defect = p.factorization_defect(&phi, y);
        if defect <= FACTORIZATION_TOL {
            log.notes
                .push(format!("coupling identity verified (defect {defect:.3e})"));
        } else {
            log.notes.push(format!(
                "coupling identity defect {defect:.3e} exceeds {FACTORIZATION_TOL:.0e}"
            ));
        }
    }

    let mut sol = Solution {
        phi,
        psi,
        r,
        s,
        residual_phi,
        residual_psi,
        log,
    };

    match analysis::classify_case(p) {
        Ok(case) => {
            let mut note = format!("classification: {}", describe_case(case));
            let nd = analysis::null_data(p).ok();
            if let Some(nd) = nd.as_ref() {
                note.push_str(&format!(", gap = {:.6e}", nd.gap));
            }
            sol.log.notes.push(note);
            if let Some(cert) = kind.certificate.as_ref() {
                let report = analysis::verify_properties(p, &sol, cert, nd.as_ref());
                if report.all_passed() {
                    sol.log.notes.push(format!(
                        "analysis: all {} property checks passed",
                        report.checks.len()
                    ));
                } else {
                    for check in report.failed() {
                        sol.log.notes.push(format!(
                            "analysis: check {} failed ({})",
                            check.name, check.detail
                        ));
                    }
                }
            }
            if matches!(case, CaseLabel::CaseI | CaseLabel::CaseII) {
                if let Ok(probe) = analysis::conjecture_probe(p, &sol) {
                    sol.log.notes.push(format!(
                        "rho(Phi Psi) = {:.12e}, margin to one = {:.3e}",
                        probe.rho, probe.margin
                    ));
                }
            }
        }
        Err(err) => sol
            .log
            .notes
            .push(format!("classification unavailable: {err}")),
    }

    Ok(sol)
}
