//! Structure-preserving doubling with alternating directional shifts.
//!
//! The iterates square the convergence order each step: after `k`
//! recurrences the error behaves like `r^(2^k)` with
//! `r = rho((R + alpha I)^{-1}(R - beta I)) * rho((S + beta I)^{-1}(S - alpha I))`,
//! which stays below one whenever the shifts dominate the diagonals of
//! `A` and `D`. `H_k` increases entrywise to `Phi` and `G_k` to the dual
//! solution `Psi`.

use super::{estimate_rate, ConvergenceLog, Solution, SolveMethod, SolverError, SolverOptions};
use crate::linalg::{spectral_radius, LuFactors, SINGULARITY_REL_TOL};
use crate::matrix::DenseMatrix;
use crate::riccati::RiccatiProblem;

pub(crate) const DEFAULT_MAX_ITER: usize = 100;
/// Multiple of the larger shift added to both shifts on the single retry
/// after `I - G H` turns numerically singular.
const RETRY_SHIFT_FACTOR: f64 = 1e-2;

/// One doubling iterate: the kernel pair `(E, F)` and the solution
/// approximations `H -> Phi`, `G -> Psi` after `k` squarings.
#[derive(Debug, Clone)]
pub struct DoublingState {
    pub e: DenseMatrix,
    pub f: DenseMatrix,
    pub g: DenseMatrix,
    pub h: DenseMatrix,
    pub k: usize,
}

fn max_diag(m: &DenseMatrix) -> f64 {
    (0..m.rows()).fold(0.0_f64, |acc, i| acc.max(m[(i, i)]))
}

/// Initial doubling state from the Cayley-like block solve
/// `[D + aI, -C; B, -A - bI] [E0, -G0; -H0, F0] = [D - bI, -C; B, -A + aI]`.
pub fn doubling_init(
    p: &RiccatiProblem,
    alpha: f64,
    beta: f64,
) -> Result<DoublingState, SolverError> {
    let n = p.n();
    let m = p.m();
    let ident_n = DenseMatrix::identity(n);
    let ident_m = DenseMatrix::identity(m);
    let neg_c = p.c().scale(-1.0);
    let lhs = DenseMatrix::from_blocks(
        &p.d().add(&ident_n.scale(alpha)),
        &neg_c,
        p.b(),
        &p.a().add(&ident_m.scale(beta)).scale(-1.0),
    );
    let rhs = DenseMatrix::from_blocks(
        &p.d().sub(&ident_n.scale(beta)),
        &neg_c,
        p.b(),
        &p.a().scale(-1.0).add(&ident_m.scale(alpha)),
    );
    let lu =
        LuFactors::factor(&lhs, SINGULARITY_REL_TOL).map_err(|_| SolverError::SingularBlock)?;
    let sol = lu.solve_mat(&rhs);
    Ok(DoublingState {
        e: sol.block(0, n, 0, n),
        g: sol.block(0, n, n, n + m).scale(-1.0),
        h: sol.block(n, n + m, 0, n).scale(-1.0),
        f: sol.block(n, n + m, n, n + m),
        k: 0,
    })
}

/// Applies one doubling recurrence in place.
fn doubling_step(state: &mut DoublingState) -> Result<(), SolverError> {
    let n = state.e.rows();
    let m = state.f.rows();
    let igh = DenseMatrix::identity(n).sub(&state.g.mul(&state.h));
    let ihg = DenseMatrix::identity(m).sub(&state.h.mul(&state.g));
    let lu_igh =
        LuFactors::factor(&igh, SINGULARITY_REL_TOL).map_err(|_| SolverError::NearSingularIGH)?;
    let lu_ihg =
        LuFactors::factor(&ihg, SINGULARITY_REL_TOL).map_err(|_| SolverError::NearSingularIGH)?;

    let e_next = state.e.mul(&lu_igh.solve_mat(&state.e));
    let f_next = state.f.mul(&lu_ihg.solve_mat(&state.f));
    let g_next = state
        .g
        .add(&state.e.mul(&lu_igh.solve_mat(&state.g.mul(&state.f))));
    let h_next = state
        .h
        .add(&state.f.mul(&lu_ihg.solve_mat(&state.h.mul(&state.e))));

    state.e = e_next;
    state.f = f_next;
    state.g = g_next;
    state.h = h_next;
    state.k += 1;
    Ok(())
}

/// `rho((R + aI)^{-1}(R - bI)) * rho((S + bI)^{-1}(S - aI))`.
fn cayley_rate_bound(r: &DenseMatrix, s: &DenseMatrix, alpha: f64, beta: f64) -> Option<f64> {
    let factor = |m: &DenseMatrix, plus: f64, minus: f64| -> Option<f64> {
        let shifted = m.add(&DenseMatrix::identity(m.rows()).scale(plus));
        let lu = LuFactors::factor(&shifted, SINGULARITY_REL_TOL).ok()?;
        let target = lu.solve_mat(&m.sub(&DenseMatrix::identity(m.rows()).scale(minus)));
        spectral_radius(&target).ok()
    };
    Some(factor(r, alpha, beta)? * factor(s, beta, alpha)?)
}

struct RunOutcome {
    state: DoublingState,
    log: ConvergenceLog,
    residual: f64,
}

fn run(
    p: &RiccatiProblem,
    opts: &SolverOptions,
    alpha: f64,
    beta: f64,
    max_iter: usize,
) -> Result<RunOutcome, SolverError> {
    let mut log = ConvergenceLog::new(SolveMethod::Doubling);
    if opts.record_iterates {
        log.iterates = Some(Vec::new());
        log.iterates_dual = Some(Vec::new());
    }
    let mut state = doubling_init(p, alpha, beta)?;
    if let Some(iterates) = log.iterates.as_mut() {
        iterates.push(state.h.clone());
    }
    if let Some(duals) = log.iterates_dual.as_mut() {
        duals.push(state.g.clone());
    }

    for _ in 0..max_iter {
        let h_prev = state.h.clone();
        doubling_step(&mut state)?;
        if !(state.e.all_finite()
            && state.f.all_finite()
            && state.g.all_finite()
            && state.h.all_finite())
        {
            // Near a singular coupling the kernel squarings amplify
            // through (I - G H)^{-1} until E or F overflows; the next
            // products would then poison H with NaN rows that the
            // NaN-discarding step norm cannot see.
            return Err(SolverError::NearSingularIGH);
        }
        let step = state.h.sub(&h_prev).norm_inf() / state.h.norm_inf().max(1.0);
        log.iterations = state.k;
        log.residual_history.push(step);
        if let Some(iterates) = log.iterates.as_mut() {
            iterates.push(state.h.clone());
        }
        if let Some(duals) = log.iterates_dual.as_mut() {
            duals.push(state.g.clone());
        }
        if step <= opts.tol {
            let residual = p.relative_residual(&state.h);
            log.notes.push(format!(
                "converged on successive differences; confirming relative residual {:.3e}",
                residual
            ));
            log.rate_estimate = estimate_rate(&log.residual_history);
            return Ok(RunOutcome {
                state,
                log,
                residual,
            });
        }
    }
    let residual = p.relative_residual(&state.h);
    log.rate_estimate = estimate_rate(&log.residual_history);
    Err(SolverError::MaxIterExceeded {
        limit: max_iter,
        residual,
        log: Box::new(log),
    })
}

pub fn solve_doubling(p: &RiccatiProblem, opts: &SolverOptions) -> Result<Solution, SolverError> {
    opts.validate()?;
    let n = p.n();
    let m = p.m();
    if n == 0 || m == 0 {
        let phi = DenseMatrix::zeros(m, n);
        let psi = DenseMatrix::zeros(n, m);
        let mut log = ConvergenceLog::new(SolveMethod::Doubling);
        log.residual_history.push(0.0);
        log.notes
            .push("empty solution shape; nothing to iterate".into());
        return Ok(Solution {
            r: p.d().sub(&p.c().mul(&phi)),
            s: Some(p.a().sub(&p.b().mul(&psi))),
            phi,
            psi: Some(psi),
            residual_phi: 0.0,
            residual_psi: Some(0.0),
            log,
        });
    }

    let amax = max_diag(p.a());
    let dmax = max_diag(p.d());
    let sda = opts.gamma.is_some();
    let (mut alpha, mut beta) = if let Some(gamma) = opts.gamma {
        if gamma < amax.max(dmax) {
            return Err(SolverError::InvalidOptions(format!(
                "gamma {gamma} is below the diagonal maximum {}",
                amax.max(dmax)
            )));
        }
        (gamma, gamma)
    } else {
        let alpha = opts.alpha.unwrap_or(amax + opts.shift_delta);
        let beta = opts.beta.unwrap_or(dmax + opts.shift_delta);
        if alpha < amax {
            return Err(SolverError::InvalidOptions(format!(
                "alpha {alpha} is below the diagonal maximum {amax} of A"
            )));
        }
        if beta < dmax {
            return Err(SolverError::InvalidOptions(format!(
                "beta {beta} is below the diagonal maximum {dmax} of D"
            )));
        }
        (alpha, beta)
    };
    let max_iter = opts.max_iter.unwrap_or(DEFAULT_MAX_ITER);

    let mut retry_note = None;
    let outcome = loop {
        match run(p, opts, alpha, beta, max_iter) {
            Err(SolverError::NearSingularIGH) if retry_note.is_none() => {
                let delta = RETRY_SHIFT_FACTOR * alpha.max(beta);
                alpha += delta;
                beta += delta;
                retry_note = Some(format!(
                    "I - G H turned numerically singular; retrying once with shift delta {delta:.3e}"
                ));
            }
            other => break other?,
        }
    };

    let RunOutcome {
        state,
        mut log,
        residual,
    } = outcome;
    if let Some(note) = retry_note {
        log.notes.insert(0, note);
    }
    log.shifts_used = if sda { vec![alpha] } else { vec![alpha, beta] };
    log.residual_history.push(residual);

    let phi = state.h;
    let psi = state.g;
    let r = p.d().sub(&p.c().mul(&phi));
    let s = p.a().sub(&p.b().mul(&psi));
    match cayley_rate_bound(&r, &s, alpha, beta) {
        Some(bound) => log.rate_bound = Some(bound),
        None => log
            .notes
            .push("rate bound unavailable: shifted closed-loop factor is singular".into()),
    }
    let residual_psi = p.dual().relative_residual(&psi);
    Ok(Solution {
        phi,
        psi: Some(psi),
        r,
        s: Some(s),
        residual_phi: residual,
        residual_psi: Some(residual_psi),
        log,
    })
}
