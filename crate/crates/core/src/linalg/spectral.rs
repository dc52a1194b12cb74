//! Spectral radius computation.

use super::schur::eigenvalues;
use super::LinalgError;
use crate::matrix::DenseMatrix;

/// Largest eigenvalue modulus of a square matrix.
pub fn spectral_radius(m: &DenseMatrix) -> Result<f64, LinalgError> {
    assert!(m.is_square(), "spectral radius needs a square matrix");
    if m.rows() == 0 {
        return Ok(0.0);
    }
    let lambdas = eigenvalues(m)?;
    Ok(lambdas.iter().map(|l| l.norm()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Power iteration on `m + I` for entrywise nonnegative `m`; the shift
    /// makes the dominant eigenvalue `rho(m) + 1` strictly dominant even
    /// for matrices with several peripheral eigenvalues.
    fn power_iteration_rho(m: &DenseMatrix) -> f64 {
        let n = m.rows();
        let shifted = m.add(&DenseMatrix::identity(n));
        let mut x = vec![1.0; n];
        let mut estimate = 0.0;
        for _ in 0..20_000 {
            let y = shifted.matvec(&x);
            let norm = y.iter().map(|v| v.abs()).fold(0.0, f64::max);
            assert!(norm > 0.0, "power iteration collapsed");
            let next: Vec<f64> = y.iter().map(|v| v / norm).collect();
            let delta: f64 = next
                .iter()
                .zip(&x)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            x = next;
            estimate = norm;
            if delta < 1e-14 {
                break;
            }
        }
        estimate - 1.0
    }

    #[test]
    fn diagonal_matrix() {
        let m = DenseMatrix::from_diag(&[1.0, -7.0, 3.0]);
        assert!((spectral_radius(&m).unwrap() - 7.0).abs() < 1e-12);
    }

    #[test]
    fn rotation_block() {
        let m = DenseMatrix::from_rows(&[&[0.0, 2.0], &[-2.0, 0.0]]);
        assert!((spectral_radius(&m).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn nilpotent_matrix() {
        let m = DenseMatrix::from_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(spectral_radius(&m).unwrap() < 1e-12);
    }

    #[test]
    fn positive_matrix_closed_form() {
        // Eigenvalues of [[1,2],[3,4]] are (5 +- sqrt(33)) / 2.
        let m = DenseMatrix::from_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let expected = (5.0 + 33.0_f64.sqrt()) / 2.0;
        assert!((spectral_radius(&m).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn agrees_with_power_iteration_on_nonnegative() {
        let m = DenseMatrix::from_rows(&[
            &[0.2, 1.3, 0.0, 0.7],
            &[0.9, 0.0, 0.4, 0.1],
            &[0.0, 0.8, 0.5, 1.1],
            &[0.3, 0.0, 1.2, 0.0],
        ]);
        let qr = spectral_radius(&m).unwrap();
        let pi = power_iteration_rho(&m);
        assert!((qr - pi).abs() < 1e-9, "qr {} vs power {}", qr, pi);
    }

    #[test]
    fn cyclic_permutation_matrix() {
        // Companion of x^3 = 1: peripheral spectrum {1, w, w^2}, rho = 1.
        let m = DenseMatrix::from_rows(&[
            &[0.0, 1.0, 0.0],
            &[0.0, 0.0, 1.0],
            &[1.0, 0.0, 0.0],
        ]);
        assert!((spectral_radius(&m).unwrap() - 1.0).abs() < 1e-12);
        assert!((power_iteration_rho(&m) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn empty_matrix() {
        let m = DenseMatrix::zeros(0, 0);
        assert_eq!(spectral_radius(&m).unwrap(), 0.0);
    }
}
