//! Invariant subspace method on an ordered real Schur form of `H`.
//!
//! Sorting the Schur form of `H = [D -C; B -A]` by descending real part
//! puts the `n` eigenvalues belonging to the minimal solution on top.
//! Splitting the leading Schur vectors as `[Y1; Y2]` with square `Y1`
//! gives `Phi = Y2 Y1^{-1}`.
//!
//! When zero is a defective double eigenvalue it splits numerically into
//! a tiny pair straddling the boundary, and the leading subspace computed
//! from the Schur vectors alone tilts toward the generalized eigenvector
//! by about the square root of machine precision. Because
//! `H = diag(I, -I) K`, the right null vector of `K` is an exact zero
//! eigenvector of `H`; in that situation the leading subspace is instead
//! assembled from the strictly positive blocks plus this null vector,
//! which restores full accuracy.

use super::{ConvergenceLog, Solution, SolveMethod, SolverError, SolverOptions};
use crate::linalg::{
    block_starts, nonneg_null_vector, ordered_real_schur, reorder_select, LuFactors, NullSide,
    SchurForm, SINGULARITY_REL_TOL,
};
use crate::matrix::{ComplexScalar, DenseMatrix};
use crate::riccati::RiccatiProblem;

/// Eigenvalue modulus below this relative band counts as zero when
/// locating the split; defective zeros scatter by about sqrt(machine
/// epsilon), so the band sits well above that.
const ZERO_BAND_REL_TOL: f64 = 1e-7;
/// Rank tolerance for the null vector of `K` on the assisted path.
const NULL_RANK_REL_TOL: f64 = 1e-10;
/// Pivot ratio of `Y1` beyond which a conditioning note is logged.
const Y1_CONDITION_NOTE: f64 = 1e8;

fn block_layout(t: &DenseMatrix) -> Vec<(usize, usize)> {
    let n = t.rows();
    block_starts(t)
        .into_iter()
        .map(|s| {
            let size = if s + 1 < n && t[(s + 1, s)] != 0.0 { 2 } else { 1 };
            (s, size)
        })
        .collect()
}

/// Solves `Phi Y1 = Y2` for the leading block columns of `q`.
fn graph_solution(
    q: &DenseMatrix,
    n: usize,
    m: usize,
    log: &mut ConvergenceLog,
) -> Result<DenseMatrix, SolverError> {
    let y1 = q.block(0, n, 0, n);
    let y2 = q.block(n, n + m, 0, n);
    solve_graph(&y1, &y2, log)
}

fn solve_graph(
    y1: &DenseMatrix,
    y2: &DenseMatrix,
    log: &mut ConvergenceLog,
) -> Result<DenseMatrix, SolverError> {
    let lu = LuFactors::factor(&y1.transpose(), SINGULARITY_REL_TOL)
        .map_err(|_| SolverError::SingularY1)?;
    if lu.pivot_ratio() > Y1_CONDITION_NOTE {
        log.notes.push(format!(
            "Y1 is ill conditioned (pivot ratio {:.3e}); solution digits may be lost",
            lu.pivot_ratio()
        ));
    }
    let phi_t = lu.solve_mat(&y2.transpose());
    Ok(phi_t.transpose())
}

/// Eigenvalues of the (reordered) Schur form in diagonal order.
fn diagonal_eigenvalues(t: &DenseMatrix) -> Vec<ComplexScalar> {
    crate::linalg::block_eigenvalues(t)
}

pub fn solve_schur(p: &RiccatiProblem, opts: &SolverOptions) -> Result<Solution, SolverError> {
    opts.validate()?;
    let n = p.n();
    let m = p.m();
    let h = p.h_matrix();
    let mut log = ConvergenceLog::new(SolveMethod::Schur);
    let phi = if n + m == 0 {
        DenseMatrix::zeros(0, 0)
    } else {
        let mut sf = ordered_real_schur(&h)?;
        let lambdas = diagonal_eigenvalues(&sf.t);
        let band = ZERO_BAND_REL_TOL * h.norm_inf().max(1.0);
        let boundary_in_zero_cluster = n >= 1
            && n < n + m
            && lambdas[n - 1].norm() <= band
            && lambdas[n].norm() <= band;
        if boundary_in_zero_cluster {
            solve_assisted(p, &mut sf, band, &mut log)?
        } else {
            if n >= 1 && n < n + m && sf.t[(n, n - 1)] != 0.0 {
                return Err(SolverError::SplitsConjugatePair);
            }
            graph_solution(&sf.q, n, m, &mut log)?
        }
    };

    let rel = p.relative_residual(&phi);
    log.iterations = 1;
    log.residual_history.push(rel);
    let r = p.d().sub(&p.c().mul(&phi));
    Ok(Solution {
        phi,
        psi: None,
        r,
        s: None,
        residual_phi: rel,
        residual_psi: None,
        log,
    })
}

/// Leading subspace from the strictly positive spectrum plus the null
/// vector of `K`, used when the split falls inside a zero cluster.
fn solve_assisted(
    p: &RiccatiProblem,
    sf: &mut SchurForm,
    band: f64,
    log: &mut ConvergenceLog,
) -> Result<DenseMatrix, SolverError> {
    let n = p.n();
    let m = p.m();
    let layout = block_layout(&sf.t);
    let lambdas = diagonal_eigenvalues(&sf.t);
    let selected: Vec<bool> = layout
        .iter()
        .map(|&(start, _)| lambdas[start].re > band)
        .collect();
    let n1: usize = layout
        .iter()
        .zip(&selected)
        .filter(|(_, &sel)| sel)
        .map(|(&(_, size), _)| size)
        .sum();
    if n1 + 1 != n {
        // Not the expected structure of a single defective zero pair at
        // the boundary; fall back to the plain split.
        if sf.t[(n, n - 1)] != 0.0 {
            return Err(SolverError::SplitsConjugatePair);
        }
        return graph_solution(&sf.q, n, m, log);
    }
    reorder_select(sf, &selected)?;
    let v = nonneg_null_vector(&p.k(), NullSide::Right, NULL_RANK_REL_TOL)?;
    log.notes.push(
        "defective zero cluster at the split; leading subspace assembled from the \
         strictly positive blocks and the null vector of K"
            .into(),
    );
    let mut y1 = DenseMatrix::zeros(n, n);
    let mut y2 = DenseMatrix::zeros(m, n);
    for col in 0..n1 {
        for row in 0..n {
            y1[(row, col)] = sf.q[(row, col)];
        }
        for row in 0..m {
            y2[(row, col)] = sf.q[(n + row, col)];
        }
    }
    for row in 0..n {
        y1[(row, n1)] = v[row];
    }
    for row in 0..m {
        y2[(row, n1)] = v[n + row];
    }
    solve_graph(&y1, &y2, log)
}

/// Solution associated with an arbitrary conjugation-closed choice of `n`
/// eigenvalues, indexed into the descending eigenvalue order of `H`.
///
/// The minimal solution corresponds to indices `0..n`; other selections
/// produce other (generally non-minimal) solutions when `Y1` is
/// invertible.
pub fn schur_select(p: &RiccatiProblem, selection: &[usize]) -> Result<DenseMatrix, SolverError> {
    let n = p.n();
    let m = p.m();
    assert_eq!(selection.len(), n, "selection must pick exactly n eigenvalues");
    let mut seen = vec![false; n + m];
    for &idx in selection {
        assert!(idx < n + m, "selection index out of range");
        assert!(!seen[idx], "selection index repeated");
        seen[idx] = true;
    }

    let h = p.h_matrix();
    let mut sf = ordered_real_schur(&h)?;
    let layout = block_layout(&sf.t);
    let mut flags = Vec::with_capacity(layout.len());
    for &(start, size) in &layout {
        let picked = (start..start + size).filter(|&pos| seen[pos]).count();
        if picked != 0 && picked != size {
            return Err(SolverError::SplitsConjugatePair);
        }
        flags.push(picked == size);
    }
    reorder_select(&mut sf, &flags)?;
    let mut log = ConvergenceLog::new(SolveMethod::Schur);
    graph_solution(&sf.q, n, m, &mut log)
}
