//! Real Schur decomposition via Householder Hessenberg reduction and the
//! Francis implicit double-shift QR iteration.
//!
//! The iteration follows the classic EISPACK/JAMA `hqr2` organization with
//! two changes: the eigenvector back-substitution is dropped (only the quasi
//! upper triangular factor and the accumulated orthogonal factor are kept),
//! and subdiagonal entries are zeroed explicitly at every deflation so that
//! the block structure of the result can be read off exactly.

use super::{LinalgError, DIMENSION_CAP};
use crate::matrix::{sort_eigenvalues_desc, ComplexScalar, DenseMatrix};

/// Iteration cap per deflation window before reporting failure.
const MAX_QR_ITER: usize = 100;

/// Real Schur form `M = Q * T * Q^T` with orthogonal `Q` and quasi upper
/// triangular `T` (1x1 blocks for real eigenvalues, 2x2 blocks for complex
/// conjugate pairs; 2x2 blocks with real eigenvalues are always split).
#[derive(Debug, Clone)]
pub struct SchurForm {
    pub q: DenseMatrix,
    pub t: DenseMatrix,
}

impl SchurForm {
    /// Eigenvalues read off the diagonal blocks of `T`, in `T` order.
    pub fn eigenvalues_in_order(&self) -> Vec<ComplexScalar> {
        block_eigenvalues(&self.t)
    }
}

/// Householder reduction to upper Hessenberg form, `M = Q * H * Q^T`.
pub fn hessenberg(m: &DenseMatrix) -> (DenseMatrix, DenseMatrix) {
    assert!(m.is_square(), "Hessenberg reduction requires a square matrix");
    let n = m.rows();
    let mut h = m.clone();
    let mut q = DenseMatrix::identity(n);
    if n < 3 {
        return (q, h);
    }
    let high = n - 1;
    let mut ort = vec![0.0; n];

    for mm in 1..high {
        let mut scale = 0.0;
        for i in mm..=high {
            scale += h[(i, mm - 1)].abs();
        }
        if scale == 0.0 {
            continue;
        }
        let mut hsum = 0.0;
        for i in (mm..=high).rev() {
            ort[i] = h[(i, mm - 1)] / scale;
            hsum += ort[i] * ort[i];
        }
        let mut g = hsum.sqrt();
        if ort[mm] > 0.0 {
            g = -g;
        }
        hsum -= ort[mm] * g;
        ort[mm] -= g;

        for j in mm..n {
            let mut f = 0.0;
            for i in (mm..=high).rev() {
                f += ort[i] * h[(i, j)];
            }
            f /= hsum;
            for i in mm..=high {
                h[(i, j)] -= f * ort[i];
            }
        }
        for i in 0..=high {
            let mut f = 0.0;
            for j in (mm..=high).rev() {
                f += ort[j] * h[(i, j)];
            }
            f /= hsum;
            for j in mm..=high {
                h[(i, j)] -= f * ort[j];
            }
        }
        ort[mm] *= scale;
        h[(mm, mm - 1)] = scale * g;
    }

    // Accumulate the reflections into Q, reading the stored vectors from the
    // otherwise unused part of H below the subdiagonal.
    for mm in (1..high).rev() {
        if h[(mm, mm - 1)] != 0.0 && ort[mm] != 0.0 {
            for i in mm + 1..=high {
                ort[i] = h[(i, mm - 1)];
            }
            for j in mm..=high {
                let mut g = 0.0;
                for i in mm..=high {
                    g += ort[i] * q[(i, j)];
                }
                g = (g / ort[mm]) / h[(mm, mm - 1)];
                for i in mm..=high {
                    q[(i, j)] += g * ort[i];
                }
            }
        }
    }

    for i in 2..n {
        for j in 0..i - 1 {
            h[(i, j)] = 0.0;
        }
    }
    (q, h)
}

/// Real Schur decomposition of a square matrix.
pub fn real_schur(m: &DenseMatrix) -> Result<SchurForm, LinalgError> {
    assert!(m.is_square(), "Schur decomposition requires a square matrix");
    assert!(
        m.rows() <= DIMENSION_CAP,
        "eigenvalue routines are capped at dimension {}",
        DIMENSION_CAP
    );
    if !m.all_finite() {
        return Err(LinalgError::NotFinite);
    }
    let nn = m.rows();
    let (q, t) = hessenberg(m);
    if nn < 2 {
        return Ok(SchurForm { q, t });
    }
    francis_qr(q, t, nn)
}

fn francis_qr(mut q: DenseMatrix, mut h: DenseMatrix, nn: usize) -> Result<SchurForm, LinalgError> {
    let eps = f64::EPSILON;
    let mut exshift = 0.0;
    let (mut p, mut qq, mut r, mut s, mut z, mut w, mut x, mut y);

    let mut norm = 0.0;
    for i in 0..nn {
        for j in i.saturating_sub(1)..nn {
            norm += h[(i, j)].abs();
        }
    }
    if norm == 0.0 {
        return Ok(SchurForm { q, t: h });
    }

    let mut en = nn - 1;
    let mut iter = 0usize;
    let mut total_iter = 0usize;

    loop {
        // Look for a single small subdiagonal element.
        let mut l = en;
        while l > 0 {
            s = h[(l - 1, l - 1)].abs() + h[(l, l)].abs();
            if s == 0.0 {
                s = norm;
            }
            if h[(l, l - 1)].abs() < eps * s {
                break;
            }
            l -= 1;
        }

        if l == en {
            // One root found.
            h[(en, en)] += exshift;
            if en > 0 {
                h[(en, en - 1)] = 0.0;
            }
            if en == 0 {
                break;
            }
            en -= 1;
            iter = 0;
        } else if l + 1 == en {
            // Two roots found.
            w = h[(en, en - 1)] * h[(en - 1, en)];
            p = (h[(en - 1, en - 1)] - h[(en, en)]) / 2.0;
            qq = p * p + w;
            z = qq.abs().sqrt();
            h[(en, en)] += exshift;
            h[(en - 1, en - 1)] += exshift;

            if qq >= 0.0 {
                // Real pair: split the block with a rotation.
                z = if p >= 0.0 { p + z } else { p - z };
                x = h[(en, en - 1)];
                s = x.abs() + z.abs();
                p = x / s;
                qq = z / s;
                r = (p * p + qq * qq).sqrt();
                p /= r;
                qq /= r;
                for j in en - 1..nn {
                    z = h[(en - 1, j)];
                    h[(en - 1, j)] = qq * z + p * h[(en, j)];
                    h[(en, j)] = qq * h[(en, j)] - p * z;
                }
                for i in 0..=en {
                    z = h[(i, en - 1)];
                    h[(i, en - 1)] = qq * z + p * h[(i, en)];
                    h[(i, en)] = qq * h[(i, en)] - p * z;
                }
                for i in 0..nn {
                    z = q[(i, en - 1)];
                    q[(i, en - 1)] = qq * z + p * q[(i, en)];
                    q[(i, en)] = qq * q[(i, en)] - p * z;
                }
                h[(en, en - 1)] = 0.0;
            }
            if en >= 2 {
                h[(en - 1, en - 2)] = 0.0;
            }
            if en == 1 {
                break;
            }
            en -= 2;
            iter = 0;
        } else {
            // No convergence yet: perform a double QR step on rows l..=en.
            x = h[(en, en)];
            y = h[(en - 1, en - 1)];
            w = h[(en, en - 1)] * h[(en - 1, en)];

            if iter == 10 || iter == 20 {
                // Exceptional shift.
                exshift += x;
                for i in 0..=en {
                    h[(i, i)] -= x;
                }
                s = h[(en, en - 1)].abs() + h[(en - 1, en - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }

            iter += 1;
            total_iter += 1;
            if iter > MAX_QR_ITER {
                return Err(LinalgError::NoConvergence {
                    iterations: total_iter,
                });
            }

            // Look for two consecutive small subdiagonal elements.
            let mut mm = en - 2;
            loop {
                z = h[(mm, mm)];
                r = x - z;
                s = y - z;
                p = (r * s - w) / h[(mm + 1, mm)] + h[(mm, mm + 1)];
                qq = h[(mm + 1, mm + 1)] - z - r - s;
                r = h[(mm + 2, mm + 1)];
                s = p.abs() + qq.abs() + r.abs();
                p /= s;
                qq /= s;
                r /= s;
                if mm == l {
                    break;
                }
                if h[(mm, mm - 1)].abs() * (qq.abs() + r.abs())
                    < eps
                        * (p.abs()
                            * (h[(mm - 1, mm - 1)].abs() + z.abs() + h[(mm + 1, mm + 1)].abs()))
                {
                    break;
                }
                mm -= 1;
            }
            for i in mm + 2..=en {
                h[(i, i - 2)] = 0.0;
                if i > mm + 2 {
                    h[(i, i - 3)] = 0.0;
                }
            }

            // Bulge chase.
            for k in mm..en {
                let notlast = k != en - 1;
                if k != mm {
                    p = h[(k, k - 1)];
                    qq = h[(k + 1, k - 1)];
                    r = if notlast { h[(k + 2, k - 1)] } else { 0.0 };
                    x = p.abs() + qq.abs() + r.abs();
                    if x == 0.0 {
                        continue;
                    }
                    p /= x;
                    qq /= x;
                    r /= x;
                }
                s = (p * p + qq * qq + r * r).sqrt();
                if p < 0.0 {
                    s = -s;
                }
                if s != 0.0 {
                    if k != mm {
                        h[(k, k - 1)] = -s * x;
                    } else if l != mm {
                        h[(k, k - 1)] = -h[(k, k - 1)];
                    }
                    p += s;
                    x = p / s;
                    y = qq / s;
                    z = r / s;
                    qq /= p;
                    r /= p;

                    for j in k..nn {
                        p = h[(k, j)] + qq * h[(k + 1, j)];
                        if notlast {
                            p += r * h[(k + 2, j)];
                            h[(k + 2, j)] -= p * z;
                        }
                        h[(k, j)] -= p * x;
                        h[(k + 1, j)] -= p * y;
                    }
                    for i in 0..=en.min(k + 3) {
                        p = x * h[(i, k)] + y * h[(i, k + 1)];
                        if notlast {
                            p += z * h[(i, k + 2)];
                            h[(i, k + 2)] -= p * r;
                        }
                        h[(i, k)] -= p;
                        h[(i, k + 1)] -= p * qq;
                    }
                    for i in 0..nn {
                        p = x * q[(i, k)] + y * q[(i, k + 1)];
                        if notlast {
                            p += z * q[(i, k + 2)];
                            q[(i, k + 2)] -= p * r;
                        }
                        q[(i, k)] -= p;
                        q[(i, k + 1)] -= p * qq;
                    }
                    // The reflector annihilated the bulge in column k - 1;
                    // store those exact zeros so T stays quasi-triangular.
                    if k != mm {
                        h[(k + 1, k - 1)] = 0.0;
                        if notlast {
                            h[(k + 2, k - 1)] = 0.0;
                        }
                    }
                }
            }
        }
    }

    Ok(SchurForm { q, t: h })
}

/// Starting row index of each diagonal block of a quasi upper triangular
/// matrix (subdiagonal entries are expected to be exact zeros at block
/// boundaries, which `real_schur` guarantees).
pub fn block_starts(t: &DenseMatrix) -> Vec<usize> {
    let n = t.rows();
    let mut starts = Vec::new();
    let mut i = 0;
    while i < n {
        starts.push(i);
        if i + 1 < n && t[(i + 1, i)] != 0.0 {
            i += 2;
        } else {
            i += 1;
        }
    }
    starts
}

/// Eigenvalues of the diagonal blocks, in the order they appear in `T`.
pub(crate) fn block_eigenvalues(t: &DenseMatrix) -> Vec<ComplexScalar> {
    let n = t.rows();
    let mut out = Vec::with_capacity(n);
    for &i in &block_starts(t) {
        if i + 1 < n && t[(i + 1, i)] != 0.0 {
            let (l1, l2) = two_by_two_eigenvalues(
                t[(i, i)],
                t[(i, i + 1)],
                t[(i + 1, i)],
                t[(i + 1, i + 1)],
            );
            out.push(l1);
            out.push(l2);
        } else {
            out.push(ComplexScalar::new(t[(i, i)], 0.0));
        }
    }
    out
}

/// Eigenvalues of `[[a, b], [c, d]]`; the member with nonnegative imaginary
/// part comes first.
pub(crate) fn two_by_two_eigenvalues(
    a: f64,
    b: f64,
    c: f64,
    d: f64,
) -> (ComplexScalar, ComplexScalar) {
    let mean = (a + d) / 2.0;
    let disc = ((a - d) / 2.0).powi(2) + b * c;
    if disc >= 0.0 {
        let sq = disc.sqrt();
        (
            ComplexScalar::new(mean + sq, 0.0),
            ComplexScalar::new(mean - sq, 0.0),
        )
    } else {
        let im = (-disc).sqrt();
        (
            ComplexScalar::new(mean, im),
            ComplexScalar::new(mean, -im),
        )
    }
}

/// All eigenvalues of a square matrix, sorted by descending real part, ties
/// by descending imaginary part.
pub fn eigenvalues(m: &DenseMatrix) -> Result<Vec<ComplexScalar>, LinalgError> {
    let sf = real_schur(m)?;
    let mut lambdas = block_eigenvalues(&sf.t);
    sort_eigenvalues_desc(&mut lambdas);
    Ok(lambdas)
}
