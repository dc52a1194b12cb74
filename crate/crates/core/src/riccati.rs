//! Problem type for the algebraic Riccati equation
//! `X C X - X D - A X + B = 0` with M-matrix block structure.

use crate::matrix::DenseMatrix;
use thiserror::Error;

/// Relative threshold for detecting zero diagonal entries of `A` and the
/// corresponding zero rows of `K` during reduction.
const ZERO_ROW_REL_TOL: f64 = 1e-13;

/// Errors raised while building or transforming a Riccati problem.
#[derive(Debug, Error)]
pub enum RiccatiError {
    /// The four coefficient blocks do not fit together.
    #[error("coefficient blocks have inconsistent shapes: {context}")]
    BadShape { context: &'static str },
    /// The block matrix `K` has entries of the wrong sign.
    #[error("K is not a Z-matrix: {context}")]
    NotZ { context: &'static str },
    /// A zero diagonal entry of `A` sits in a row of `K` with nonzero
    /// entries; no positive `v` with `K v >= 0` can exist then.
    #[error(
        "zero diagonal entry of A in a nonzero row of K rules out a positive vector v with K v >= 0"
    )]
    NotRegular,
}

/// Coefficients of `X C X - X D - A X + B = 0`.
///
/// `A` is `m x m`, `D` is `n x n`, `B` is `m x n`, `C` is `n x m`, and the
/// unknown `X` is `m x n`. Either dimension may be zero, which arises
/// when the reduction of zero rows removes the whole `A` side.
#[derive(Debug, Clone, PartialEq)]
pub struct RiccatiProblem {
    a: DenseMatrix,
    b: DenseMatrix,
    c: DenseMatrix,
    d: DenseMatrix,
}

/// Outcome of pushing the zero rows of `K` below the Riccati blocks.
#[derive(Debug, Clone)]
pub struct Reduction {
    /// Row `k` of the permuted `A` side is row `permutation[k]` of the
    /// original one; the trailing `r` entries index the removed rows.
    pub permutation: Vec<usize>,
    /// Number of removed (identically zero) rows.
    pub r: usize,
    /// The reduced problem on the remaining `m - r` rows.
    pub problem: RiccatiProblem,
}

impl RiccatiProblem {
    /// Validates shapes and the Z-sign pattern of `K`.
    pub fn new(
        a: DenseMatrix,
        b: DenseMatrix,
        c: DenseMatrix,
        d: DenseMatrix,
    ) -> Result<Self, RiccatiError> {
        let m = a.rows();
        let n = d.rows();
        if !a.is_square() {
            return Err(RiccatiError::BadShape { context: "A must be square" });
        }
        if !d.is_square() {
            return Err(RiccatiError::BadShape { context: "D must be square" });
        }
        if b.rows() != m || b.cols() != n {
            return Err(RiccatiError::BadShape { context: "B must be m x n" });
        }
        if c.rows() != n || c.cols() != m {
            return Err(RiccatiError::BadShape { context: "C must be n x m" });
        }
        for i in 0..m {
            for j in 0..m {
                if i != j && a[(i, j)] > 0.0 {
                    return Err(RiccatiError::NotZ {
                        context: "A has a positive off-diagonal entry",
                    });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && d[(i, j)] > 0.0 {
                    return Err(RiccatiError::NotZ {
                        context: "D has a positive off-diagonal entry",
                    });
                }
            }
        }
        if !b.is_nonneg(0.0) {
            return Err(RiccatiError::NotZ { context: "B has a negative entry" });
        }
        if !c.is_nonneg(0.0) {
            return Err(RiccatiError::NotZ { context: "C has a negative entry" });
        }
        Ok(Self { a, b, c, d })
    }

    /// Splits `K = [D -C; -B A]` with leading block size `n`.
    pub fn from_k(k: &DenseMatrix, n: usize) -> Result<Self, RiccatiError> {
        if !k.is_square() || n > k.rows() {
            return Err(RiccatiError::BadShape {
                context: "K must be square with leading block size at most its order",
            });
        }
        let total = k.rows();
        let d = k.block(0, n, 0, n);
        let c = k.block(0, n, n, total).scale(-1.0);
        let b = k.block(n, total, 0, n).scale(-1.0);
        let a = k.block(n, total, n, total);
        Self::new(a, b, c, d)
    }

    pub fn a(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn b(&self) -> &DenseMatrix {
        &self.b
    }

    pub fn c(&self) -> &DenseMatrix {
        &self.c
    }

    pub fn d(&self) -> &DenseMatrix {
        &self.d
    }

    /// Row dimension of the unknown (order of `A`).
    pub fn m(&self) -> usize {
        self.a.rows()
    }

    /// Column dimension of the unknown (order of `D`).
    pub fn n(&self) -> usize {
        self.d.rows()
    }

    /// The M-matrix candidate `K = [D -C; -B A]`.
    pub fn k(&self) -> DenseMatrix {
        DenseMatrix::from_blocks(
            &self.d,
            &self.c.scale(-1.0),
            &self.b.scale(-1.0),
            &self.a,
        )
    }

    /// The spectrally relevant matrix `H = [D -C; B -A]`.
    pub fn h_matrix(&self) -> DenseMatrix {
        DenseMatrix::from_blocks(
            &self.d,
            &self.c.scale(-1.0),
            &self.b,
            &self.a.scale(-1.0),
        )
    }

    /// Residual `X C X - X D - A X + B` at a candidate solution.
    pub fn residual(&self, x: &DenseMatrix) -> DenseMatrix {
        assert_eq!(x.rows(), self.m(), "candidate has wrong row count");
        assert_eq!(x.cols(), self.n(), "candidate has wrong column count");
        x.mul(&self.c)
            .mul(x)
            .sub(&x.mul(&self.d))
            .sub(&self.a.mul(x))
            .add(&self.b)
    }

    /// Residual scaled by the natural magnitude of its four terms; exact
    /// zeros (including the empty problem) report zero.
    pub fn relative_residual(&self, x: &DenseMatrix) -> f64 {
        let num = self.residual(x).norm_fro();
        let xn = x.norm_fro();
        let den = self.b.norm_fro()
            + xn * (self.c.norm_fro() * xn + self.d.norm_fro() + self.a.norm_fro());
        if num == 0.0 {
            0.0
        } else {
            num / den
        }
    }

    /// The dual problem, whose minimal solution is the `Psi` factor: the
    /// unknown `Y` of `Y B Y - Y A - D Y + C = 0` has shape `n x m`.
    pub fn dual(&self) -> RiccatiProblem {
        RiccatiProblem {
            a: self.d.clone(),
            b: self.c.clone(),
            c: self.b.clone(),
            d: self.a.clone(),
        }
    }

    /// Detects zero diagonal entries of `A`, verifies that the matching
    /// rows of `K` vanish, and permutes them below the active blocks.
    ///
    /// With `[[I, 0], [0, P]]` applied symmetrically to `K`, the permuted
    /// solution is the reduced one with `r` zero rows appended, which
    /// [`Self::embed_solution`] undoes.
    pub fn reduce_zero_diagonal(&self) -> Result<Reduction, RiccatiError> {
        let m = self.m();
        let n = self.n();
        let diag_tol = ZERO_ROW_REL_TOL * (1.0 + self.a.norm_inf());
        let k = self.k();
        let row_tol = ZERO_ROW_REL_TOL * (1.0 + k.norm_inf());

        let mut keep = Vec::new();
        let mut drop = Vec::new();
        for i in 0..m {
            if self.a[(i, i)].abs() <= diag_tol {
                for j in 0..n + m {
                    if k[(n + i, j)].abs() > row_tol {
                        return Err(RiccatiError::NotRegular);
                    }
                }
                drop.push(i);
            } else {
                keep.push(i);
            }
        }
        let r = drop.len();
        let mut permutation = keep.clone();
        permutation.extend_from_slice(&drop);

        let mt = keep.len();
        let mut a = DenseMatrix::zeros(mt, mt);
        let mut b = DenseMatrix::zeros(mt, n);
        let mut c = DenseMatrix::zeros(n, mt);
        for (ri, &oi) in keep.iter().enumerate() {
            for (ci, &oj) in keep.iter().enumerate() {
                a[(ri, ci)] = self.a[(oi, oj)];
            }
            for j in 0..n {
                b[(ri, j)] = self.b[(oi, j)];
                c[(j, ri)] = self.c[(j, oi)];
            }
        }
        Ok(Reduction {
            permutation,
            r,
            problem: RiccatiProblem {
                a,
                b,
                c,
                d: self.d.clone(),
            },
        })
    }

    /// Lifts the reduced minimal solution back to the original row order,
    /// filling the removed rows with exact zeros.
    pub fn embed_solution(&self, reduction: &Reduction, phi_reduced: &DenseMatrix) -> DenseMatrix {
        let m = self.m();
        let n = self.n();
        let mt = m - reduction.r;
        assert_eq!(phi_reduced.rows(), mt, "reduced solution has wrong row count");
        assert_eq!(phi_reduced.cols(), n, "reduced solution has wrong column count");
        let mut phi = DenseMatrix::zeros(m, n);
        for k in 0..mt {
            let oi = reduction.permutation[k];
            for j in 0..n {
                phi[(oi, j)] = phi_reduced[(k, j)];
            }
        }
        phi
    }

    /// Maximum relative defect in the coupling identity
    /// `H [I, Psi; Phi, I] = [I, Psi; Phi, I] diag(D - C Phi, -(A - B Psi))`,
    /// which bundles both the primal and the dual equation.
    pub fn factorization_defect(&self, phi: &DenseMatrix, psi: &DenseMatrix) -> f64 {
        let m = self.m();
        let n = self.n();
        assert_eq!(phi.rows(), m, "Phi has wrong row count");
        assert_eq!(phi.cols(), n, "Phi has wrong column count");
        assert_eq!(psi.rows(), n, "Psi has wrong row count");
        assert_eq!(psi.cols(), m, "Psi has wrong column count");
        let h = self.h_matrix();
        let w = DenseMatrix::from_blocks(
            &DenseMatrix::identity(n),
            psi,
            phi,
            &DenseMatrix::identity(m),
        );
        let r = self.d.sub(&self.c.mul(phi));
        let s = self.a.sub(&self.b.mul(psi));
        let block = DenseMatrix::from_blocks(
            &r,
            &DenseMatrix::zeros(n, m),
            &DenseMatrix::zeros(m, n),
            &s.scale(-1.0),
        );
        let lhs = h.mul(&w);
        let rhs = w.mul(&block);
        lhs.max_abs_diff(&rhs) / h.max_abs().max(1.0)
    }

    /// Whether the coupling identity holds within `tol` (relative).
    pub fn verify_factorization(&self, phi: &DenseMatrix, psi: &DenseMatrix, tol: f64) -> bool {
        self.factorization_defect(phi, psi) <= tol
    }
}
