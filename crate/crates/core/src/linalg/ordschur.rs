//! Orthogonal reordering of real Schur forms.
//!
//! Adjacent diagonal blocks are swapped by solving a small Sylvester
//! equation for the coupling, orthonormalizing `[X; I]` with Householder
//! reflections, and applying the resulting rotation as a similarity
//! transform. Conjugate 2x2 blocks always travel as a unit.

use super::schur::{block_eigenvalues, block_starts, real_schur, SchurForm};
use super::{linear_solve, LinalgError};
use crate::matrix::DenseMatrix;

/// Residual and orthogonality budget for a block swap; exceeding it aborts
/// the reordering instead of silently returning a degraded factorization.
const SWAP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy)]
struct BlockKey {
    size: usize,
    re: f64,
    im: f64,
}

fn block_keys(t: &DenseMatrix) -> Vec<BlockKey> {
    let starts = block_starts(t);
    let lambdas = block_eigenvalues(t);
    let n = t.rows();
    let mut keys = Vec::with_capacity(starts.len());
    for &s in &starts {
        let size = if s + 1 < n && t[(s + 1, s)] != 0.0 { 2 } else { 1 };
        // For a conjugate pair the representative has the nonnegative
        // imaginary part; lambdas is in T order.
        keys.push(BlockKey {
            size,
            re: lambdas[s].re,
            im: lambdas[s].im.abs(),
        });
    }
    keys
}

fn key_greater(a: &BlockKey, b: &BlockKey) -> bool {
    a.re > b.re || (a.re == b.re && a.im > b.im)
}

/// Orthogonal factor of a thin Householder QR of `w`; the first `w.cols()`
/// columns span the column space of `w`.
fn householder_q(w: &DenseMatrix) -> DenseMatrix {
    let s = w.rows();
    let cols = w.cols();
    let mut r = w.clone();
    let mut g = DenseMatrix::identity(s);
    for j in 0..cols {
        let mut v: Vec<f64> = (j..s).map(|i| r[(i, j)]).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if v[0] >= 0.0 { -norm } else { norm };
        v[0] -= alpha;
        let vn = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if vn == 0.0 {
            continue;
        }
        for x in &mut v {
            *x /= vn;
        }
        for c in j..cols {
            let mut dot = 0.0;
            for (k, vk) in v.iter().enumerate() {
                dot += vk * r[(j + k, c)];
            }
            dot *= 2.0;
            for (k, vk) in v.iter().enumerate() {
                r[(j + k, c)] -= dot * vk;
            }
        }
        for i in 0..s {
            let mut dot = 0.0;
            for (k, vk) in v.iter().enumerate() {
                dot += g[(i, j + k)] * vk;
            }
            dot *= 2.0;
            for (k, vk) in v.iter().enumerate() {
                g[(i, j + k)] -= dot * vk;
            }
        }
    }
    g
}

/// Swaps the adjacent blocks of sizes `p1`, `p2` starting at row `i`.
fn swap_adjacent(
    t: &mut DenseMatrix,
    q: &mut DenseMatrix,
    i: usize,
    p1: usize,
    p2: usize,
) -> Result<(), LinalgError> {
    let n = t.rows();
    let s = p1 + p2;
    let a11 = t.block(i, i + p1, i, i + p1);
    let a12 = t.block(i, i + p1, i + p1, i + s);
    let a22 = t.block(i + p1, i + s, i + p1, i + s);

    // Coupling X from A11 X - X A22 = -A12, via the small Kronecker system.
    let dim = p1 * p2;
    let mut op = DenseMatrix::zeros(dim, dim);
    for ri in 0..p1 {
        for ci in 0..p2 {
            for rj in 0..p1 {
                for cj in 0..p2 {
                    let mut v = 0.0;
                    if ci == cj {
                        v += a11[(ri, rj)];
                    }
                    if ri == rj {
                        v -= a22[(cj, ci)];
                    }
                    op[(ri * p2 + ci, rj * p2 + cj)] = v;
                }
            }
        }
    }
    let mut rhs = DenseMatrix::zeros(dim, 1);
    for ri in 0..p1 {
        for ci in 0..p2 {
            rhs[(ri * p2 + ci, 0)] = -a12[(ri, ci)];
        }
    }
    let xv = linear_solve(&op, &rhs).map_err(|_| LinalgError::ReorderFailure)?;

    let mut w = DenseMatrix::zeros(s, p2);
    for ri in 0..p1 {
        for ci in 0..p2 {
            w[(ri, ci)] = xv[(ri * p2 + ci, 0)];
        }
    }
    for ci in 0..p2 {
        w[(p1 + ci, ci)] = 1.0;
    }
    let g = householder_q(&w);

    // Verify on the local block before touching the full factorization.
    let mut local = DenseMatrix::zeros(s, s);
    local.set_block(0, 0, &a11);
    local.set_block(0, p1, &a12);
    local.set_block(p1, p1, &a22);
    let swapped = g.transpose().mul(&local).mul(&g);
    let scale = local.max_abs().max(1.0);
    let mut defect: f64 = 0.0;
    for r in p2..s {
        for c in 0..p2 {
            defect = defect.max(swapped[(r, c)].abs());
        }
    }
    if defect > SWAP_TOL * scale {
        return Err(LinalgError::ReorderFailure);
    }

    // T <- diag(I, G, I)^T * T * diag(I, G, I), Q <- Q * diag(I, G, I).
    let mut tmp = vec![0.0; s];
    for col in i..n {
        for (k, slot) in tmp.iter_mut().enumerate() {
            let mut acc = 0.0;
            for r in 0..s {
                acc += g[(r, k)] * t[(i + r, col)];
            }
            *slot = acc;
        }
        for (k, &v) in tmp.iter().enumerate() {
            t[(i + k, col)] = v;
        }
    }
    for row in 0..i + s {
        for (k, slot) in tmp.iter_mut().enumerate() {
            let mut acc = 0.0;
            for c in 0..s {
                acc += t[(row, i + c)] * g[(c, k)];
            }
            *slot = acc;
        }
        for (k, &v) in tmp.iter().enumerate() {
            t[(row, i + k)] = v;
        }
    }
    for row in 0..q.rows() {
        for (k, slot) in tmp.iter_mut().enumerate() {
            let mut acc = 0.0;
            for c in 0..s {
                acc += q[(row, i + c)] * g[(c, k)];
            }
            *slot = acc;
        }
        for (k, &v) in tmp.iter().enumerate() {
            q[(row, i + k)] = v;
        }
    }

    // Restore exact zeros below the two swapped blocks.
    for r in p2..s {
        for c in 0..p2 {
            t[(i + r, i + c)] = 0.0;
        }
    }
    Ok(())
}

fn check_orthogonality(q: &DenseMatrix) -> Result<(), LinalgError> {
    let n = q.rows();
    let defect = q
        .transpose()
        .mul(q)
        .max_abs_diff(&DenseMatrix::identity(n));
    if defect > SWAP_TOL {
        return Err(LinalgError::ReorderFailure);
    }
    Ok(())
}

/// Real Schur form with diagonal blocks sorted by descending real part,
/// ties broken by descending imaginary part of the block representative.
pub fn ordered_real_schur(m: &DenseMatrix) -> Result<SchurForm, LinalgError> {
    let mut sf = real_schur(m)?;
    let mut keys = block_keys(&sf.t);

    // Bubble sort on the tracked keys; eigenvalues are never recomputed
    // during the pass, so termination does not depend on roundoff.
    let mut changed = true;
    while changed {
        changed = false;
        let mut start = 0;
        let mut j = 0;
        while j + 1 < keys.len() {
            if key_greater(&keys[j + 1], &keys[j]) {
                swap_adjacent(&mut sf.t, &mut sf.q, start, keys[j].size, keys[j + 1].size)?;
                keys.swap(j, j + 1);
                changed = true;
            }
            start += keys[j].size;
            j += 1;
        }
    }
    check_orthogonality(&sf.q)?;
    Ok(sf)
}

/// Moves the blocks flagged in `selected` (indexed in current block order)
/// to the top of the Schur form, preserving their relative order.
pub fn reorder_select(sf: &mut SchurForm, selected: &[bool]) -> Result<(), LinalgError> {
    let sizes: Vec<usize> = {
        let starts = block_starts(&sf.t);
        let n = sf.t.rows();
        starts
            .iter()
            .map(|&s| {
                if s + 1 < n && sf.t[(s + 1, s)] != 0.0 {
                    2
                } else {
                    1
                }
            })
            .collect()
    };
    assert_eq!(
        selected.len(),
        sizes.len(),
        "selection flags must match block count"
    );
    let mut blocks: Vec<(usize, bool)> = sizes.iter().copied().zip(selected.iter().copied()).collect();
    let mut target = 0;
    for idx in 0..blocks.len() {
        if !blocks[idx].1 {
            continue;
        }
        for j in (target..idx).rev() {
            let start: usize = blocks[..j].iter().map(|b| b.0).sum();
            swap_adjacent(&mut sf.t, &mut sf.q, start, blocks[j].0, blocks[j + 1].0)?;
            blocks.swap(j, j + 1);
        }
        target += 1;
    }
    check_orthogonality(&sf.q)?;
    Ok(())
}
