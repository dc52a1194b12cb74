//! Structural analysis of a solved equation: null vectors of `K`, the
//! eigenvalue split of `H`, the three-way classification of singular
//! problems, and verification of the properties the minimal solution is
//! known to satisfy.
//!
//! When `K` is singular with one-dimensional null spaces, the sign of the
//! gap `u1' v1 - u2' v2` built from the left and right null vectors decides
//! which of the blocks `D - C Phi` and `A - Phi C` is singular. The zero
//! gap case is the critical one: both blocks are singular, zero is a double
//! eigenvalue of `H`, and `I - Phi Psi` degrades to a singular M-matrix.
//! The checks here measure each of those statements with explicit margins
//! so borderline inputs remain auditable.

use std::fmt;

use thiserror::Error;

use crate::linalg::{
    complete_pivot_rank, eigenvalues, nonneg_null_vector, spectral_radius, LinalgError, NullSide,
};
use crate::matrix::{sort_eigenvalues_desc, ComplexScalar, DenseMatrix};
use crate::mmatrix::categorize;
use crate::riccati::RiccatiProblem;
use crate::solvers::{schur_select, Solution, SolverError};

/// Band on `|gap|` relative to `|u|_2 |v|_2` below which the gap counts
/// as zero and the problem as critical.
pub const GAP_REL_TOL: f64 = 1e-10;
/// Relative band for collecting eigenvalues of `H` into the zero cluster.
pub const ZERO_CLUSTER_REL_TOL: f64 = 1e-7;
/// Rank tolerance for the numerical null space dimension of `H`.
const EIGVEC_RANK_REL_TOL: f64 = 1e-9;
/// Rank tolerance for the null vector extraction from `K`.
const NULL_RANK_REL_TOL: f64 = 1e-10;
/// Accepted roundoff when checking the one-sided bounds `Phi v1 <= v2`.
const INEQ_SLACK: f64 = 1e-9;
/// Accepted deviation in the case-specific equalities such as `Phi v1 = v2`.
const EQUALITY_TOL: f64 = 1e-8;
/// Matching tolerance for the eigenvalue assignment multiset compare.
const EIG_MATCH_TOL: f64 = 1e-8;
/// Absolute tolerance on the trace identity.
const TRACE_TOL: f64 = 1e-8;
/// Allowed imaginary part for the two eigenvalues flanking the split.
const BOUNDARY_IMAG_TOL: f64 = 1e-10;
/// Entries must exceed this for a solution to count as strictly positive.
const POSITIVITY_ABS: f64 = 1e-8;
/// Threshold on `min |eig| / scale` for the singular / nonsingular call.
const SINGULAR_STATUS_REL_TOL: f64 = 1e-8;
/// Required strict distance of `rho(Phi Psi)` from one when a positive
/// factor forces a contraction.
const RHO_STRICT_TOL: f64 = 1e-10;
/// Minimal pairwise eigenvalue separation for the all-simple precondition.
/// A defective double eigenvalue splits numerically by about the square
/// root of machine precision, so the threshold sits well above that.
const SIMPLE_SEP_TOL: f64 = 1e-6;
/// Enumeration is a desk-scale oracle; larger problems are rejected.
const MAX_ENUM_DIM: usize = 10;
/// Safety cap on the number of eigenvalue subsets tried.
const MAX_ENUM_SUBSETS: usize = 256;
/// Residual gate for accepting an enumerated candidate as a solution.
const CANDIDATE_RESIDUAL_TOL: f64 = 1e-8;

/// Errors raised by the analysis operations.
#[derive(Debug, Error)]
pub enum AnalysisError {
    /// The null space of `K` (or of its transpose) is not one-dimensional,
    /// so the gap classification does not apply.
    #[error("null space of K is not one-dimensional (dimension {found})")]
    DegenerateNullSpace { found: usize },
    /// A precondition of the requested probe does not hold.
    #[error("analysis step does not apply: {0}")]
    NotApplicable(&'static str),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// Left and right null vectors of a singular `K`, split at the `D` block.
///
/// Both vectors are nonnegative with unit 1-norm; `gap` is
/// `u1' v1 - u2' v2` and its sign drives [`classify_case`].
#[derive(Debug, Clone)]
pub struct NullData {
    pub u1: Vec<f64>,
    pub u2: Vec<f64>,
    pub v1: Vec<f64>,
    pub v2: Vec<f64>,
    pub gap: f64,
}

impl NullData {
    /// Band below which `|gap|` counts as zero for this pair of vectors.
    pub fn gap_band(&self) -> f64 {
        let u = l2(&self.u1).hypot(l2(&self.u2));
        let v = l2(&self.v1).hypot(l2(&self.v2));
        GAP_REL_TOL * u * v
    }
}

/// Counts of the eigenvalues of `H` by location relative to the imaginary
/// axis, plus the geometric multiplicity of the zero cluster.
#[derive(Debug, Clone)]
pub struct EigenStructure {
    /// Eigenvalues with negative real part.
    pub m1: usize,
    /// Eigenvalues with positive real part.
    pub n1: usize,
    /// Size of the zero cluster, `(m - m1) + (n - n1)`.
    pub r: usize,
    /// Numerical dimension of the null space of `H`.
    pub eigvec_count: usize,
    /// All eigenvalues in descending order of real part.
    pub lambdas: Vec<ComplexScalar>,
}

/// Where a problem falls in the singularity trichotomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseLabel {
    /// `K` nonsingular; both `D - C Phi` and `A - Phi C` are nonsingular.
    NonsingularK,
    /// Positive gap: `D - C Phi` singular, `A - Phi C` nonsingular.
    CaseI,
    /// Negative gap: `D - C Phi` nonsingular, `A - Phi C` singular.
    CaseII,
    /// Zero gap: both singular, zero is a defective eigenvalue of `H`.
    CaseIII,
    /// Null space of `K` not one-dimensional; the gap is undefined.
    DegenerateNullSpace,
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            CaseLabel::NonsingularK => "nonsingular",
            CaseLabel::CaseI => "I",
            CaseLabel::CaseII => "II",
            CaseLabel::CaseIII => "III",
            CaseLabel::DegenerateNullSpace => "degenerate",
        };
        f.write_str(text)
    }
}

/// One verified property with its measured margin.
#[derive(Debug, Clone)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub passed: bool,
    /// Measured slack or deviation; the direction is described in `detail`.
    pub margin: f64,
    pub detail: String,
}

/// Collection of property checks for one solved problem.
#[derive(Debug, Clone, Default)]
pub struct PropertyReport {
    pub checks: Vec<PropertyCheck>,
}

impl PropertyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&PropertyCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    fn push(&mut self, name: &'static str, passed: bool, margin: f64, detail: String) {
        self.checks.push(PropertyCheck {
            name,
            passed,
            margin,
            detail,
        });
    }
}

/// Outcome of the contraction probe on a noncritical singular problem.
#[derive(Debug, Clone)]
pub struct ProbeResult {
    /// Spectral radius of `Phi Psi`.
    pub rho: f64,
    /// `1 - rho`; a nonpositive value is a candidate counterexample.
    pub margin: f64,
    pub case: CaseLabel,
}

/// Outcome of enumerating all graph-subspace solutions of a small problem.
#[derive(Debug, Clone)]
pub struct SecondSolutionReport {
    /// Number of entrywise strictly positive solutions found.
    pub positive_count: usize,
    /// Number of conjugation-closed eigenvalue subsets tried.
    pub selections_tested: usize,
    /// The strictly positive solutions themselves.
    pub solutions: Vec<DenseMatrix>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn l2(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Row vector times matrix, `out[j] = sum_i v[i] m[i][j]`.
fn row_times(v: &[f64], m: &DenseMatrix) -> Vec<f64> {
    assert_eq!(v.len(), m.rows(), "row vector length mismatch");
    let mut out = vec![0.0; m.cols()];
    for i in 0..m.rows() {
        for (j, slot) in out.iter_mut().enumerate() {
            *slot += v[i] * m[(i, j)];
        }
    }
    out
}

fn max_abs_dev(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "deviation length mismatch");
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Smallest eigenvalue magnitude relative to the matrix scale; infinity
/// for the empty matrix, which is vacuously nonsingular.
fn singularity_measure(m: &DenseMatrix) -> Result<f64, LinalgError> {
    if m.rows() == 0 {
        return Ok(f64::INFINITY);
    }
    let lam = eigenvalues(m)?;
    let min = lam.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    Ok(min / m.norm_inf().max(1.0))
}

fn case_from_gap(nd: &NullData) -> CaseLabel {
    if nd.gap.abs() <= nd.gap_band() {
        CaseLabel::CaseIII
    } else if nd.gap > 0.0 {
        CaseLabel::CaseI
    } else {
        CaseLabel::CaseII
    }
}

/// Nonnegative unit left and right null vectors of `K`, split at `n`.
///
/// Fails with [`AnalysisError::DegenerateNullSpace`] when either null
/// space is not one-dimensional at the fixed rank tolerance.
pub fn null_data(p: &RiccatiProblem) -> Result<NullData, AnalysisError> {
    let n = p.n();
    if n + p.m() == 0 {
        return Err(AnalysisError::DegenerateNullSpace { found: 0 });
    }
    let k = p.k();
    let map_err = |e: LinalgError| match e {
        LinalgError::NullSpaceDimension { found } => AnalysisError::DegenerateNullSpace { found },
        other => AnalysisError::Linalg(other),
    };
    let v = nonneg_null_vector(&k, NullSide::Right, NULL_RANK_REL_TOL).map_err(map_err)?;
    let u = nonneg_null_vector(&k, NullSide::Left, NULL_RANK_REL_TOL).map_err(map_err)?;
    let gap = dot(&u[..n], &v[..n]) - dot(&u[n..], &v[n..]);
    Ok(NullData {
        u1: u[..n].to_vec(),
        u2: u[n..].to_vec(),
        v1: v[..n].to_vec(),
        v2: v[n..].to_vec(),
        gap,
    })
}

/// Eigenvalue counts of `H` by sign of real part, with `|lambda| <= tol`
/// defining the zero cluster.
///
/// The geometric multiplicity is measured as the numerical null space
/// dimension of `H` and clamped into `1..=r` when the cluster is nonempty.
pub fn zero_eigen_structure(
    p: &RiccatiProblem,
    tol: f64,
) -> Result<EigenStructure, AnalysisError> {
    let n = p.n();
    let m = p.m();
    if n + m == 0 {
        return Ok(EigenStructure {
            m1: 0,
            n1: 0,
            r: 0,
            eigvec_count: 0,
            lambdas: Vec::new(),
        });
    }
    let h = p.h_matrix();
    let lambdas = eigenvalues(&h)?;
    let mut n1 = 0;
    let mut m1 = 0;
    let mut r = 0;
    for z in &lambdas {
        if z.norm() <= tol {
            r += 1;
        } else if z.re.abs() <= tol {
            // Off-axis magnitude with a near-zero real part: count by the
            // closest half plane rather than the cluster.
            if z.re >= 0.0 {
                n1 += 1;
            } else {
                m1 += 1;
            }
        } else if z.re > 0.0 {
            n1 += 1;
        } else {
            m1 += 1;
        }
    }
    let mut eigvec_count = (n + m) - complete_pivot_rank(&h, EIGVEC_RANK_REL_TOL);
    if r >= 1 {
        eigvec_count = eigvec_count.clamp(1, r);
    }
    Ok(EigenStructure {
        m1,
        n1,
        r,
        eigvec_count,
        lambdas,
    })
}

/// Places the problem in the trichotomy: nonsingular `K`, positive gap,
/// negative gap, zero gap, or an unusable null space.
pub fn classify_case(p: &RiccatiProblem) -> Result<CaseLabel, AnalysisError> {
    if p.n() + p.m() == 0 {
        return Ok(CaseLabel::NonsingularK);
    }
    let kind = categorize(&p.k())?;
    if !kind.singular {
        return Ok(CaseLabel::NonsingularK);
    }
    match null_data(p) {
        Ok(nd) => Ok(case_from_gap(&nd)),
        Err(AnalysisError::DegenerateNullSpace { .. }) => Ok(CaseLabel::DegenerateNullSpace),
        Err(e) => Err(e),
    }
}

/// Maximum deviation between two eigenvalue multisets after sorting, with
/// members of the shared zero cluster compared as exact zeros.
fn multiset_deviation(a: &[ComplexScalar], b: &[ComplexScalar], zero_band: f64) -> f64 {
    assert_eq!(a.len(), b.len(), "multiset size mismatch");
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    sort_eigenvalues_desc(&mut a);
    sort_eigenvalues_desc(&mut b);
    a.iter()
        .zip(&b)
        .map(|(x, y)| {
            if x.norm() <= zero_band && y.norm() <= zero_band {
                0.0
            } else {
                (x - y).norm()
            }
        })
        .fold(0.0, f64::max)
}

/// Verifies the bounds, equalities, and spectral statements the minimal
/// solution must satisfy, one named check per property.
///
/// `cert` is a positive vector with `K cert >= 0` (the regularity
/// certificate); `nd` supplies null vector data when `K` is singular with
/// one-dimensional null spaces. Checks that need the dual factor are
/// skipped with a note when `sol.psi` is absent.
pub fn verify_properties(
    p: &RiccatiProblem,
    sol: &Solution,
    cert: &[f64],
    nd: Option<&NullData>,
) -> PropertyReport {
    let n = p.n();
    let m = p.m();
    assert_eq!(cert.len(), n + m, "certificate length must be n + m");
    let mut report = PropertyReport::default();
    let phi = &sol.phi;
    let psi = sol.psi.as_ref();

    {
        let scale = 1.0 + cert.iter().fold(0.0f64, |acc, &x| acc.max(x.abs()));
        let slack = INEQ_SLACK * scale;
        let (cv1, cv2) = cert.split_at(n);
        let mut margin = f64::INFINITY;
        let lhs = phi.matvec(cv1);
        for i in 0..m {
            margin = margin.min(cv2[i] - lhs[i]);
        }
        let mut detail = String::from("Phi v1 <= v2 on the certificate split");
        if let Some(psi) = psi {
            let lhs = psi.matvec(cv2);
            for j in 0..n {
                margin = margin.min(cv1[j] - lhs[j]);
            }
            detail.push_str(" and Psi v2 <= v1");
        } else {
            detail.push_str("; Psi unavailable, dual bound skipped");
        }
        report.push("certificate_bound", margin >= -slack, margin, detail);
    }

    if let Some(nd) = nd {
        let mut margin = f64::INFINITY;
        let lhs = phi.matvec(&nd.v1);
        for i in 0..m {
            margin = margin.min(nd.v2[i] - lhs[i]);
        }
        let u2phi = row_times(&nd.u2, phi);
        for j in 0..n {
            margin = margin.min(nd.u1[j] - u2phi[j]);
        }
        let mut detail = String::from("Phi v1 <= v2 and u2' Phi <= u1'");
        if let Some(psi) = psi {
            let lhs = psi.matvec(&nd.v2);
            for j in 0..n {
                margin = margin.min(nd.v1[j] - lhs[j]);
            }
            let u1psi = row_times(&nd.u1, psi);
            for i in 0..m {
                margin = margin.min(nd.u2[i] - u1psi[i]);
            }
            detail.push_str(", Psi v2 <= v1 and u1' Psi <= u2'");
        } else {
            detail.push_str("; Psi unavailable, dual bounds skipped");
        }
        report.push("null_vector_bounds", margin >= -INEQ_SLACK, margin, detail);
    }

    if let Some(psi) = psi {
        if n == 0 || m == 0 {
            report.push(
                "coupling_m_matrices",
                true,
                f64::INFINITY,
                "empty coupling products".into(),
            );
        } else {
            let prod = phi.mul(psi);
            let ippsi = DenseMatrix::identity(m).sub(&prod);
            let ipsip = DenseMatrix::identity(n).sub(&psi.mul(phi));
            match (categorize(&ippsi), categorize(&ipsip), spectral_radius(&prod)) {
                (Ok(k1), Ok(k2), Ok(rho)) => {
                    let ok = k1.is_m && k1.regular && k2.is_m && k2.regular;
                    let detail = format!(
                        "I - Phi Psi {}singular, I - Psi Phi {}singular, rho(Phi Psi) = {:.6e}",
                        if k1.singular { "" } else { "non" },
                        if k2.singular { "" } else { "non" },
                        rho,
                    );
                    report.push("coupling_m_matrices", ok, 1.0 - rho, detail);
                }
                (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => report.push(
                    "coupling_m_matrices",
                    false,
                    f64::NAN,
                    format!("classification failed: {e}"),
                ),
            }
        }
    }

    if let Some(nd) = nd {
        let case = case_from_gap(nd);
        let mut devs: Vec<f64> = Vec::new();
        let mut parts: Vec<String> = Vec::new();
        let dev_phiv = max_abs_dev(&phi.matvec(&nd.v1), &nd.v2);
        let dev_u2phi = max_abs_dev(&row_times(&nd.u2, phi), &nd.u1);
        let dev_psiv = psi.map(|ps| max_abs_dev(&ps.matvec(&nd.v2), &nd.v1));
        let dev_u1psi = psi.map(|ps| max_abs_dev(&row_times(&nd.u1, ps), &nd.u2));
        let mut want_phiv = false;
        let mut want_u2phi = false;
        match case {
            CaseLabel::CaseI => {
                want_phiv = true;
            }
            CaseLabel::CaseII => {
                want_u2phi = true;
            }
            CaseLabel::CaseIII => {
                want_phiv = true;
                want_u2phi = true;
            }
            _ => unreachable!("gap classification always yields a case label"),
        }
        if want_phiv {
            devs.push(dev_phiv);
            parts.push(format!("|Phi v1 - v2| = {dev_phiv:.3e}"));
            if let Some(d) = dev_u1psi {
                devs.push(d);
                parts.push(format!("|u1' Psi - u2'| = {d:.3e}"));
            }
        }
        if want_u2phi {
            devs.push(dev_u2phi);
            parts.push(format!("|u2' Phi - u1'| = {dev_u2phi:.3e}"));
            if let Some(d) = dev_psiv {
                devs.push(d);
                parts.push(format!("|Psi v2 - v1| = {d:.3e}"));
            }
        }
        let margin = devs.iter().fold(0.0f64, |acc, &d| acc.max(d));
        report.push(
            "case_equalities",
            margin <= EQUALITY_TOL,
            margin,
            format!("case {case}: {}", parts.join(", ")),
        );

        let r_mat = p.d().sub(&p.c().mul(phi));
        let s_mat = p.a().sub(&phi.mul(p.c()));
        match (singularity_measure(&r_mat), singularity_measure(&s_mat)) {
            (Ok(mr), Ok(ms)) => {
                let r_singular = mr <= SINGULAR_STATUS_REL_TOL;
                let s_singular = ms <= SINGULAR_STATUS_REL_TOL;
                let ok = match case {
                    CaseLabel::CaseI => r_singular && !s_singular,
                    CaseLabel::CaseII => !r_singular && s_singular,
                    CaseLabel::CaseIII => r_singular && s_singular,
                    _ => unreachable!("gap classification always yields a case label"),
                };
                report.push(
                    "case_singularity",
                    ok,
                    mr.min(ms),
                    format!(
                        "case {case}: min |eig| / scale of D - C Phi = {mr:.3e}, of A - Phi C = {ms:.3e}"
                    ),
                );
            }
            (Err(e), _) | (_, Err(e)) => report.push(
                "case_singularity",
                false,
                f64::NAN,
                format!("eigenvalue computation failed: {e}"),
            ),
        }
    }

    if n + m > 0 {
        let h = p.h_matrix();
        let scale = h.norm_inf().max(1.0);
        let band = ZERO_CLUSTER_REL_TOL * scale;
        match eigenvalues(&h) {
            Ok(lam) => {
                let top = &lam[..n];
                let bottom_neg: Vec<ComplexScalar> = lam[n..].iter().map(|z| -z).collect();
                let r_mat = p.d().sub(&p.c().mul(phi));
                let s_mat = match psi {
                    Some(ps) => p.a().sub(&p.b().mul(ps)),
                    None => p.a().sub(&phi.mul(p.c())),
                };
                match (eigenvalues(&r_mat), eigenvalues(&s_mat)) {
                    (Ok(er), Ok(es)) => {
                        let dev_r = multiset_deviation(&er, top, band);
                        let dev_s = multiset_deviation(&es, &bottom_neg, band);
                        let worst = dev_r.max(dev_s);
                        report.push(
                            "eigenvalue_assignment",
                            worst <= EIG_MATCH_TOL * scale,
                            worst,
                            format!(
                                "eig(D - C Phi) vs top block off by {dev_r:.3e}, \
                                 negated bottom block off by {dev_s:.3e}"
                            ),
                        );
                    }
                    (Err(e), _) | (_, Err(e)) => report.push(
                        "eigenvalue_assignment",
                        false,
                        f64::NAN,
                        format!("eigenvalue computation failed: {e}"),
                    ),
                }

                let top_sum: f64 = top
                    .iter()
                    .map(|z| if z.norm() <= band { 0.0 } else { z.re })
                    .sum();
                let tdev = (r_mat.trace() - top_sum).abs();
                report.push(
                    "trace_identity",
                    tdev <= TRACE_TOL,
                    tdev,
                    format!(
                        "trace(D - C Phi) = {:.12e}, sum of top real parts = {top_sum:.12e}",
                        r_mat.trace()
                    ),
                );

                if n >= 1 && m >= 1 {
                    let flank = [lam[n - 1], lam[n]];
                    let worst_imag = flank.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
                    let passed = flank.iter().all(|z| {
                        let allow = if z.norm() <= band {
                            // Inside the zero cluster a defective pair may
                            // split off the axis by cluster-sized noise.
                            band
                        } else {
                            BOUNDARY_IMAG_TOL * scale
                        };
                        z.im.abs() <= allow
                    });
                    report.push(
                        "boundary_real",
                        passed,
                        worst_imag,
                        format!(
                            "lambda_n = {:.6e} + {:.6e}i, lambda_n+1 = {:.6e} + {:.6e}i",
                            flank[0].re, flank[0].im, flank[1].re, flank[1].im
                        ),
                    );
                }
            }
            Err(e) => report.push(
                "eigenvalue_assignment",
                false,
                f64::NAN,
                format!("eigenvalue computation failed: {e}"),
            ),
        }
    }

    if let Some(psi) = psi {
        let r1 = p.d().sub(&p.c().mul(phi));
        let r2 = p.d().sub(&psi.mul(p.b()));
        let s1 = p.a().sub(&phi.mul(p.c()));
        let s2 = p.a().sub(&p.b().mul(psi));
        let measures: Result<Vec<f64>, LinalgError> = [&r1, &r2, &s1, &s2]
            .iter()
            .map(|mat| singularity_measure(mat))
            .collect();
        match measures {
            Ok(ms) => {
                let status: Vec<bool> = ms.iter().map(|&x| x <= SINGULAR_STATUS_REL_TOL).collect();
                let ok = status[0] == status[1] && status[2] == status[3];
                let margin = ms
                    .iter()
                    .map(|&x| (x - SINGULAR_STATUS_REL_TOL).abs())
                    .fold(f64::INFINITY, f64::min);
                report.push(
                    "similarity_consistency",
                    ok,
                    margin,
                    format!(
                        "min |eig| / scale: D - C Phi {:.3e}, D - Psi B {:.3e}, \
                         A - Phi C {:.3e}, A - B Psi {:.3e}",
                        ms[0], ms[1], ms[2], ms[3]
                    ),
                );
            }
            Err(e) => report.push(
                "similarity_consistency",
                false,
                f64::NAN,
                format!("eigenvalue computation failed: {e}"),
            ),
        }
    }

    if let Some(nd) = nd {
        let band = ZERO_CLUSTER_REL_TOL * p.h_matrix().norm_inf().max(1.0);
        match zero_eigen_structure(p, band) {
            Ok(es) => {
                let nonzero_gap = nd.gap.abs() > nd.gap_band();
                let ok = nonzero_gap == (es.r == 1);
                report.push(
                    "gap_simple_zero",
                    ok,
                    nd.gap.abs() - nd.gap_band(),
                    format!("gap = {:.6e}, zero cluster size r = {}", nd.gap, es.r),
                );
            }
            Err(e) => report.push(
                "gap_simple_zero",
                false,
                f64::NAN,
                format!("eigenvalue computation failed: {e}"),
            ),
        }
    }

    if let (Some(nd), Some(psi)) = (nd, psi) {
        let positive =
            phi.min_entry() > POSITIVITY_ABS || psi.min_entry() > POSITIVITY_ABS;
        if nd.gap.abs() > nd.gap_band() && positive && n >= 1 && m >= 1 {
            match spectral_radius(&phi.mul(psi)) {
                Ok(rho) => report.push(
                    "strict_contraction",
                    rho < 1.0 - RHO_STRICT_TOL,
                    1.0 - rho,
                    format!("positive factor with nonzero gap; rho(Phi Psi) = {rho:.12e}"),
                ),
                Err(e) => report.push(
                    "strict_contraction",
                    false,
                    f64::NAN,
                    format!("spectral radius failed: {e}"),
                ),
            }
        }
    }

    report
}

/// Measures `rho(Phi Psi)` on a regular singular problem with nonzero gap.
///
/// The conjecture under test says the coupling products stay nonsingular
/// there, so `margin = 1 - rho` should be strictly positive; a nonpositive
/// margin is a reportable finding, not an error. Problems outside the
/// precondition produce [`AnalysisError::NotApplicable`].
pub fn conjecture_probe(p: &RiccatiProblem, sol: &Solution) -> Result<ProbeResult, AnalysisError> {
    if p.n() + p.m() == 0 {
        return Err(AnalysisError::NotApplicable("empty problem"));
    }
    let kind = categorize(&p.k())?;
    if !(kind.is_m && kind.singular && kind.regular) {
        return Err(AnalysisError::NotApplicable(
            "probe requires a regular singular K",
        ));
    }
    let case = classify_case(p)?;
    if !matches!(case, CaseLabel::CaseI | CaseLabel::CaseII) {
        return Err(AnalysisError::NotApplicable(
            "probe requires a nonzero gap (case I or II)",
        ));
    }
    let psi = sol.psi.as_ref().ok_or(AnalysisError::NotApplicable(
        "probe requires the dual factor Psi",
    ))?;
    let rho = spectral_radius(&sol.phi.mul(psi))?;
    Ok(ProbeResult {
        rho,
        margin: 1.0 - rho,
        case,
    })
}

/// Enumerates every conjugation-closed choice of `n` eigenvalues of `H`,
/// solves for the matching graph subspace, and counts the entrywise
/// strictly positive solutions.
///
/// Only valid when the eigenvalues of `H` are all simple, in which case at
/// most two positive solutions can exist; the count is asserted. The
/// enumeration is limited to desk-scale problems.
pub fn second_solution_count_check(
    p: &RiccatiProblem,
) -> Result<SecondSolutionReport, AnalysisError> {
    let n = p.n();
    let m = p.m();
    if n + m > MAX_ENUM_DIM {
        return Err(AnalysisError::NotApplicable(
            "enumeration is capped at n + m <= 10",
        ));
    }
    let h = p.h_matrix();
    let scale = h.norm_inf().max(1.0);
    let lam = eigenvalues(&h)?;
    for i in 0..lam.len() {
        for j in i + 1..lam.len() {
            if (lam[i] - lam[j]).norm() <= SIMPLE_SEP_TOL * scale {
                return Err(AnalysisError::NotApplicable(
                    "eigenvalues of H are not all simple",
                ));
            }
        }
    }

    // Conjugation units: a real eigenvalue stands alone, a complex one is
    // paired with its conjugate so selections stay closed under conjugation.
    let imag_tol = SIMPLE_SEP_TOL * scale;
    let mut used = vec![false; lam.len()];
    let mut units: Vec<Vec<usize>> = Vec::new();
    for i in 0..lam.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        if lam[i].im.abs() <= imag_tol {
            units.push(vec![i]);
            continue;
        }
        let partner = (0..lam.len())
            .find(|&j| !used[j] && (lam[j] - lam[i].conj()).norm() <= imag_tol);
        match partner {
            Some(j) => {
                used[j] = true;
                units.push(vec![i, j]);
            }
            None => {
                return Err(AnalysisError::NotApplicable(
                    "complex eigenvalue without a conjugate partner",
                ));
            }
        }
    }

    let mut selections_tested = 0usize;
    let mut solutions: Vec<DenseMatrix> = Vec::new();
    for mask in 0u32..(1u32 << units.len()) {
        let size: usize = units
            .iter()
            .enumerate()
            .filter(|(idx, _)| mask & (1 << idx) != 0)
            .map(|(_, unit)| unit.len())
            .sum();
        if size != n {
            continue;
        }
        selections_tested += 1;
        assert!(
            selections_tested <= MAX_ENUM_SUBSETS,
            "eigenvalue subset enumeration exceeded its cap"
        );
        let mut selection: Vec<usize> = Vec::with_capacity(n);
        for (idx, unit) in units.iter().enumerate() {
            if mask & (1 << idx) != 0 {
                selection.extend_from_slice(unit);
            }
        }
        match schur_select(p, &selection) {
            Ok(candidate) => {
                if p.relative_residual(&candidate) <= CANDIDATE_RESIDUAL_TOL
                    && candidate.min_entry() > POSITIVITY_ABS
                {
                    solutions.push(candidate);
                }
            }
            Err(SolverError::SingularY1) | Err(SolverError::SplitsConjugatePair) => {}
            Err(SolverError::Linalg(LinalgError::ReorderFailure)) => {}
            Err(e) => return Err(e.into()),
        }
    }

    let report = SecondSolutionReport {
        positive_count: solutions.len(),
        selections_tested,
        solutions,
    };
    assert!(
        report.positive_count <= 2,
        "more than two strictly positive solutions found"
    );
    Ok(report)
}
