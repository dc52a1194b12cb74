//! Structural classification of Z- and M-matrices.
//!
//! A Z-matrix has nonpositive off-diagonal entries. Writing it as
//! `M = s I - N` with `N >= 0`, it is an M-matrix exactly when
//! `s >= rho(N)`, singular when equality holds. A singular M-matrix is
//! called regular here when some strictly positive vector `v` satisfies
//! `M v >= 0`; nonsingular M-matrices always admit such a vector. These
//! properties decide which Riccati equations have well posed minimal
//! solutions, so the classifier reports them together with a certificate.

mod simplex;

use crate::linalg::{complete_pivot_rank, spectral_radius, LinalgError};
use crate::matrix::DenseMatrix;
use petgraph::algo::kosaraju_scc;
use petgraph::graph::DiGraph;

/// Relative tolerance on `s - rho(N)` for the singular / nonsingular call.
pub const CATEGORIZE_REL_TOL: f64 = 1e-10;
/// Relative rank tolerance used for the null space dimension.
pub const RANK_REL_TOL: f64 = 1e-10;
/// Accepted roundoff in the certificate feasibility check `M v >= 0`.
const FEAS_REL_TOL: f64 = 1e-12;

/// Classification of a square matrix with respect to M-matrix structure.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixKind {
    /// Off-diagonal entries are all nonpositive.
    pub is_z: bool,
    /// Z-matrix with `s >= rho(N)` up to tolerance.
    pub is_m: bool,
    /// M-matrix with `s = rho(N)` up to tolerance.
    pub singular: bool,
    /// Directed graph of nonzero off-diagonal entries is strongly connected.
    pub irreducible: bool,
    /// Some `v > 0` satisfies `M v >= 0`.
    pub regular: bool,
    /// The vector `v` witnessing regularity, when one was found.
    pub certificate: Option<Vec<f64>>,
    /// Null space dimension (zero for nonsingular matrices).
    pub null_rank: usize,
}

/// Whether all off-diagonal entries are nonpositive.
pub fn is_z_matrix(m: &DenseMatrix) -> bool {
    assert!(m.is_square(), "Z-matrix test needs a square matrix");
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if i != j && m[(i, j)] > 0.0 {
                return false;
            }
        }
    }
    true
}

/// Whether the directed graph with an edge `i -> j` for each nonzero
/// off-diagonal entry is strongly connected.
pub fn is_irreducible(m: &DenseMatrix) -> bool {
    assert!(m.is_square(), "irreducibility test needs a square matrix");
    let n = m.rows();
    if n <= 1 {
        return true;
    }
    let mut graph = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for i in 0..n {
        for j in 0..n {
            if i != j && m[(i, j)] != 0.0 {
                graph.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    kosaraju_scc(&graph).len() == 1
}

/// Searches for `v > 0` with `M v >= 0` (up to roundoff).
///
/// The all-ones vector is tried first; otherwise the search is phrased as
/// the linear feasibility problem `M y >= -M e`, `y >= 0` with `v = e + y`,
/// which loses no generality because any positive certificate can be
/// scaled so its smallest entry is one.
pub fn regularity_certificate(m: &DenseMatrix) -> Option<Vec<f64>> {
    assert!(m.is_square(), "certificate search needs a square matrix");
    let n = m.rows();
    let feas_tol = FEAS_REL_TOL * m.norm_inf().max(1.0);
    let ones = vec![1.0; n];
    let me = m.matvec(&ones);
    if me.iter().all(|&x| x >= -feas_tol) {
        return Some(ones);
    }

    let rows: Vec<Vec<f64>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let b: Vec<f64> = me.iter().map(|&x| -x).collect();
    let y = simplex::feasible_point(&rows, &b)?;
    let v: Vec<f64> = y.iter().map(|&x| 1.0 + x).collect();
    let mv = m.matvec(&v);
    let vmax = v.iter().fold(1.0_f64, |a, &x| a.max(x));
    if mv.iter().all(|&x| x >= -feas_tol * vmax) {
        Some(v)
    } else {
        None
    }
}

/// Full structural classification of `m`.
///
/// Non-Z matrices report `is_m = false` with the remaining structural
/// fields still filled in. The singularity call compares `s - rho(N)`
/// against [`CATEGORIZE_REL_TOL`] relative to `max(s, 1)`.
pub fn categorize(m: &DenseMatrix) -> Result<MatrixKind, LinalgError> {
    assert!(m.is_square(), "classification needs a square matrix");
    assert!(m.rows() > 0, "classification needs a nonempty matrix");
    let n = m.rows();
    let is_z = is_z_matrix(m);
    let irreducible = is_irreducible(m);
    if !is_z {
        return Ok(MatrixKind {
            is_z,
            is_m: false,
            singular: false,
            irreducible,
            regular: false,
            certificate: None,
            null_rank: 0,
        });
    }

    let s = (0..n).map(|i| m[(i, i)]).fold(0.0_f64, f64::max);
    let mut nonneg = m.scale(-1.0);
    for i in 0..n {
        nonneg[(i, i)] += s;
    }
    let rho = spectral_radius(&nonneg)?;
    let margin = s - rho;
    let tol = CATEGORIZE_REL_TOL * s.max(1.0);

    if margin < -tol {
        return Ok(MatrixKind {
            is_z,
            is_m: false,
            singular: false,
            irreducible,
            regular: false,
            certificate: None,
            null_rank: 0,
        });
    }

    let singular = margin <= tol;
    let null_rank = if singular {
        n - complete_pivot_rank(m, RANK_REL_TOL)
    } else {
        0
    };
    let certificate = regularity_certificate(m);
    let regular = certificate.is_some();
    Ok(MatrixKind {
        is_z,
        is_m: true,
        singular,
        irreducible,
        regular,
        certificate,
        null_rank,
    })
}
