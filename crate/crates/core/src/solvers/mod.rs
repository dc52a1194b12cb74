//! Solvers for the minimal nonnegative solution of the Riccati equation.
//!
//! Four algorithms are provided: a diagonal-splitting fixed-point
//! iteration, Newton's method with Sylvester corrections, invariant
//! subspace extraction from an ordered Schur form, and the
//! alternating-directional doubling iteration that produces the primal
//! and dual solutions together. [`solve`] wires them behind one entry
//! point with classification, reduction of zero rows, and analysis of
//! the singular cases.

mod doubling;
mod fixed_point;
mod newton;
mod pipeline;
mod schur_method;

pub use doubling::{doubling_init, solve_doubling, DoublingState};
pub use fixed_point::solve_fixed_point;
pub use newton::solve_newton;
pub use pipeline::solve;
pub use schur_method::{schur_select, solve_schur};

use crate::linalg::LinalgError;
use crate::matrix::DenseMatrix;
use crate::riccati::{RiccatiError, RiccatiProblem};
use thiserror::Error;

/// Algorithm selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    FixedPoint,
    Newton,
    Doubling,
    Schur,
    /// Reserved; requesting it reports [`SolverError::UnimplementedMethod`].
    ModifiedSchur,
}

impl SolveMethod {
    pub fn name(&self) -> &'static str {
        match self {
            SolveMethod::FixedPoint => "fixed_point",
            SolveMethod::Newton => "newton",
            SolveMethod::Doubling => "doubling",
            SolveMethod::Schur => "schur",
            SolveMethod::ModifiedSchur => "modified_schur",
        }
    }
}

/// Options shared by all solvers; method-specific fields are ignored by
/// the methods that do not use them.
#[derive(Debug, Clone)]
pub struct SolverOptions {
    pub method: SolveMethod,
    /// Relative tolerance of the stopping rule.
    pub tol: f64,
    /// Iteration cap; `None` selects the per-method default
    /// (10000 fixed-point, 100 Newton, 100 doubling).
    pub max_iter: Option<usize>,
    /// Doubling shift for the `A` side; default `max a_ii + shift_delta`.
    pub alpha: Option<f64>,
    /// Doubling shift for the `D` side; default `max d_jj + shift_delta`.
    pub beta: Option<f64>,
    /// Single doubling shift `alpha = beta = gamma`.
    pub gamma: Option<f64>,
    /// Additive safety margin on the default doubling shifts.
    pub shift_delta: f64,
    /// Keep every iterate in the log (memory scales with iterations).
    pub record_iterates: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            method: SolveMethod::Doubling,
            tol: 1e-12,
            max_iter: None,
            alpha: None,
            beta: None,
            gamma: None,
            shift_delta: 0.0,
            record_iterates: false,
        }
    }
}

impl SolverOptions {
    pub fn with_method(method: SolveMethod) -> Self {
        Self {
            method,
            ..Self::default()
        }
    }

    pub(crate) fn validate(&self) -> Result<(), SolverError> {
        if !(self.tol > 0.0) {
            return Err(SolverError::InvalidOptions(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == Some(0) {
            return Err(SolverError::InvalidOptions(
                "iteration limit must be at least 1".into(),
            ));
        }
        if self.shift_delta < 0.0 {
            return Err(SolverError::InvalidOptions(format!(
                "shift delta must be nonnegative, got {}",
                self.shift_delta
            )));
        }
        if self.gamma.is_some() && (self.alpha.is_some() || self.beta.is_some()) {
            return Err(SolverError::InvalidOptions(
                "gamma excludes explicit alpha/beta".into(),
            ));
        }
        Ok(())
    }
}

/// Diagnostic record of one solver run.
#[derive(Debug, Clone)]
pub struct ConvergenceLog {
    pub method: SolveMethod,
    pub iterations: usize,
    /// Relative residual per iteration (successive-difference measure for
    /// doubling, with a final residual confirmation noted separately).
    pub residual_history: Vec<f64>,
    /// Tail geometric ratio of the history; near zero for superlinear runs.
    pub rate_estimate: f64,
    /// Shift parameters actually used: `[gamma]` or `[alpha, beta]`.
    pub shifts_used: Vec<f64>,
    /// Theoretical doubling rate bound from the closed-loop matrices.
    pub rate_bound: Option<f64>,
    pub notes: Vec<String>,
    /// Primal iterates when requested via `record_iterates`.
    pub iterates: Option<Vec<DenseMatrix>>,
    /// Dual iterates (doubling only) when requested.
    pub iterates_dual: Option<Vec<DenseMatrix>>,
}

impl ConvergenceLog {
    pub(crate) fn new(method: SolveMethod) -> Self {
        Self {
            method,
            iterations: 0,
            residual_history: Vec::new(),
            rate_estimate: 0.0,
            shifts_used: Vec::new(),
            rate_bound: None,
            notes: Vec::new(),
            iterates: None,
            iterates_dual: None,
        }
    }
}

/// A computed minimal solution with its closed-loop matrices.
#[derive(Debug, Clone)]
pub struct Solution {
    /// Minimal nonnegative solution of the primal equation (`m x n`).
    pub phi: DenseMatrix,
    /// Minimal solution of the dual equation when the method produced it.
    pub psi: Option<DenseMatrix>,
    /// Closed-loop matrix `R = D - C Phi`.
    pub r: DenseMatrix,
    /// Closed-loop matrix `S = A - B Psi` when `Psi` is available.
    pub s: Option<DenseMatrix>,
    /// Relative residual of `Phi` in the primal equation.
    pub residual_phi: f64,
    /// Relative residual of `Psi` in the dual equation.
    pub residual_psi: Option<f64>,
    pub log: ConvergenceLog,
}

/// Errors reported by the solver layer.
#[derive(Debug, Error)]
pub enum SolverError {
    #[error("K is not an M-matrix; the equation has no minimal nonnegative solution theory")]
    NotMMatrix,
    #[error(
        "K is a singular M-matrix admitting no positive v with K v >= 0, so the minimal solution need not exist"
    )]
    NotRegular,
    #[error("fixed-point splitting undefined: a[{i},{i}] + d[{j},{j}] = {sum} is not positive")]
    IllDefined { i: usize, j: usize, sum: f64 },
    #[error("iteration limit {limit} reached (last residual {residual:.3e})")]
    MaxIterExceeded {
        limit: usize,
        residual: f64,
        log: Box<ConvergenceLog>,
    },
    #[error(
        "Newton correction operator is numerically singular (separation {min_separation:.3e}); critical case suspected"
    )]
    NearSingularOperator { min_separation: f64 },
    #[error("requested eigenvalue split cuts a complex conjugate pair")]
    SplitsConjugatePair,
    #[error("leading subspace block Y1 is singular; the eigenvalue selection carries no graph-form solution")]
    SingularY1,
    #[error("doubling initialization block matrix is singular")]
    SingularBlock,
    #[error("I - G H became numerically singular during doubling")]
    NearSingularIGH,
    #[error("the modified Schur method is reserved but not implemented")]
    UnimplementedMethod,
    #[error("invalid solver options: {0}")]
    InvalidOptions(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Riccati(#[from] RiccatiError),
}

/// Tail geometric convergence ratio of a residual history; zero when the
/// history is too short or not positive.
pub(crate) fn estimate_rate(history: &[f64]) -> f64 {
    let tail: Vec<f64> = history
        .iter()
        .rev()
        .take(6)
        .copied()
        .filter(|&x| x > 0.0)
        .collect();
    if tail.len() < 2 {
        return 0.0;
    }
    // tail is reversed: tail[0] is the latest residual.
    let newest = tail[0];
    let oldest = tail[tail.len() - 1];
    if oldest <= 0.0 {
        return 0.0;
    }
    (newest / oldest).powf(1.0 / (tail.len() - 1) as f64)
}

/// Relative size of an update step.
pub(crate) fn relative_step(next: &DenseMatrix, prev: &DenseMatrix) -> f64 {
    next.max_abs_diff(prev) / next.norm_inf().max(1.0)
}

/// Dispatches to the method selected in `opts` without classification or
/// reduction; [`solve`] is the full pipeline.
pub fn solve_with_method(
    p: &RiccatiProblem,
    opts: &SolverOptions,
) -> Result<Solution, SolverError> {
    opts.validate()?;
    match opts.method {
        SolveMethod::FixedPoint => solve_fixed_point(p, opts),
        SolveMethod::Newton => solve_newton(p, opts),
        SolveMethod::Doubling => solve_doubling(p, opts),
        SolveMethod::Schur => solve_schur(p, opts),
        SolveMethod::ModifiedSchur => Err(SolverError::UnimplementedMethod),
    }
}
