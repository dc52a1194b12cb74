//! Phase-one simplex feasibility solver for `M y >= b`, `y >= 0`.
//!
//! Only feasibility is needed, so the solver runs a single phase that
//! minimizes the artificial variable total under Bland's rule, which
//! rules out cycling.

/// Absolute pivot threshold on the scaled tableau.
const PIVOT_TOL: f64 = 1e-9;
/// Residual infeasibility accepted as "feasible" after optimization.
const FEAS_TOL: f64 = 1e-9;
const MAX_PIVOTS: usize = 20_000;

/// Returns some `y >= 0` with `rows * y >= b` entrywise, or `None` when no
/// such vector exists. `rows` is a dense row-major constraint matrix.
pub(crate) fn feasible_point(rows: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let nc = rows.len();
    assert_eq!(nc, b.len(), "constraint count mismatch");
    if nc == 0 {
        return Some(Vec::new());
    }
    let nv = rows[0].len();

    // Scale so tableau entries are order one.
    let mut scale: f64 = 1.0;
    for (row, &bi) in rows.iter().zip(b) {
        assert_eq!(row.len(), nv, "ragged constraint matrix");
        for &x in row {
            scale = scale.max(x.abs());
        }
        scale = scale.max(bi.abs());
    }

    // Constraint i becomes: sign * (row_i y) - sign * s_i [+ a_i] = sign * b_i
    // with the sign chosen so the right-hand side is nonnegative. Rows that
    // flip sign start feasible with the surplus variable basic; the others
    // need an artificial variable.
    let needs_artificial: Vec<bool> = b.iter().map(|&bi| bi > 0.0).collect();
    let na = needs_artificial.iter().filter(|&&x| x).count();
    let total = nv + nc + na;
    let mut t = vec![vec![0.0; total + 1]; nc];
    let mut basis = vec![0usize; nc];
    let mut next_art = 0usize;
    for i in 0..nc {
        let sign = if b[i] > 0.0 { 1.0 } else { -1.0 };
        for j in 0..nv {
            t[i][j] = sign * rows[i][j] / scale;
        }
        t[i][nv + i] = -sign;
        t[i][total] = sign * b[i] / scale;
        if needs_artificial[i] {
            let col = nv + nc + next_art;
            next_art += 1;
            t[i][col] = 1.0;
            basis[i] = col;
        } else {
            basis[i] = nv + i;
        }
    }

    let is_artificial = |v: usize| v >= nv + nc;

    for _ in 0..MAX_PIVOTS {
        // Reduced costs of the artificial total, recomputed to avoid drift.
        let mut w = vec![0.0; total];
        let mut w0 = 0.0;
        for i in 0..nc {
            if is_artificial(basis[i]) {
                for (j, wj) in w.iter_mut().enumerate() {
                    *wj += t[i][j];
                }
                w0 += t[i][total];
            }
        }
        if w0 <= FEAS_TOL {
            break;
        }

        // Bland: smallest-index improving non-artificial column.
        let mut entering = None;
        for (j, &wj) in w.iter().enumerate().take(nv + nc) {
            if wj > PIVOT_TOL && !basis.contains(&j) {
                entering = Some(j);
                break;
            }
        }
        let entering = entering?;

        let mut leaving: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        for i in 0..nc {
            if t[i][entering] <= PIVOT_TOL {
                continue;
            }
            let ratio = t[i][total] / t[i][entering];
            match leaving {
                None => {
                    leaving = Some(i);
                    best_ratio = ratio;
                }
                Some(l) => {
                    let tie = (ratio - best_ratio).abs() <= 1e-12 * best_ratio.abs().max(1.0);
                    if tie {
                        // Bland: break ties on the smallest basic variable.
                        if basis[i] < basis[l] {
                            leaving = Some(i);
                        }
                    } else if ratio < best_ratio {
                        leaving = Some(i);
                        best_ratio = ratio;
                    }
                }
            }
        }
        let leaving = leaving?;

        let pivot = t[leaving][entering];
        for x in t[leaving].iter_mut() {
            *x /= pivot;
        }
        for i in 0..nc {
            if i == leaving {
                continue;
            }
            let factor = t[i][entering];
            if factor != 0.0 {
                for j in 0..=total {
                    t[i][j] -= factor * t[leaving][j];
                }
            }
        }
        basis[leaving] = entering;
    }

    let residual: f64 = (0..nc)
        .filter(|&i| is_artificial(basis[i]))
        .map(|i| t[i][total])
        .sum();
    if residual > FEAS_TOL {
        return None;
    }

    let mut y = vec![0.0; nv];
    for i in 0..nc {
        if basis[i] < nv {
            y[basis[i]] = t[i][total].max(0.0);
        }
    }
    Some(y)
}
