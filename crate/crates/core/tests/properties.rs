//! Randomized property tests over the seeded problem generators.

use proptest::prelude::*;

use mare_core::analysis::{self, ZERO_CLUSTER_REL_TOL};
use mare_core::mmatrix::categorize;
use mare_core::{
    perturb_alpha, random_generator_k, random_problem, DenseMatrix, GenCategory, GenSpec,
    MatrixFile, SolveMethod, SolverOptions,
};

fn spec_for(category: GenCategory, n: usize, m: usize, seed: u64) -> GenSpec {
    GenSpec::for_category(category, n, m, seed)
}

/// Entrywise `a <= b + slack`.
fn dominated_by(a: &DenseMatrix, b: &DenseMatrix, slack: f64) -> bool {
    assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()));
    (0..a.rows()).all(|i| (0..a.cols()).all(|j| a[(i, j)] <= b[(i, j)] + slack))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// The same seed always reproduces the same matrix, bit for bit.
    #[test]
    fn generator_is_deterministic(
        seed in any::<u64>(),
        n in 1usize..5,
        m in 1usize..5,
    ) {
        let spec = spec_for(GenCategory::Nonsingular, n, m, seed);
        let a = random_generator_k(&spec).unwrap();
        let b = random_generator_k(&spec).unwrap();
        for i in 0..n + m {
            for j in 0..n + m {
                prop_assert_eq!(a[(i, j)].to_bits(), b[(i, j)].to_bits());
            }
        }
    }

    /// Zero-row-sum generation makes the all-ones vector a certificate.
    #[test]
    fn zero_row_sums_certify_with_ones(
        seed in any::<u64>(),
        n in 1usize..4,
        m in 1usize..4,
    ) {
        let spec = spec_for(GenCategory::IrreducibleSingular, n, m, seed);
        let k = random_generator_k(&spec).unwrap();
        let kind = categorize(&k).unwrap();
        prop_assert!(kind.singular && kind.regular);
        prop_assert_eq!(kind.certificate.unwrap(), vec![1.0; n + m]);
    }

    /// The basic iteration climbs monotonically from zero and stays under
    /// the certificate bound at every step.
    #[test]
    fn fixed_point_iterates_climb_under_the_certificate(
        seed in any::<u64>(),
        n in 2usize..5,
        m in 2usize..5,
    ) {
        let p = random_problem(&spec_for(GenCategory::Nonsingular, n, m, seed)).unwrap();
        let mut opts = SolverOptions::with_method(SolveMethod::FixedPoint);
        opts.tol = 1e-10;
        opts.max_iter = Some(50_000);
        opts.record_iterates = true;
        let sol = mare_core::solve(&p, &opts).unwrap();
        let iterates = sol.log.iterates.as_ref().expect("recorded");
        let scale = sol.phi.max_abs().max(1.0);
        for pair in iterates.windows(2) {
            prop_assert!(dominated_by(&pair[0], &pair[1], 1e-14 * scale));
        }
        for x in iterates {
            prop_assert!(dominated_by(x, &sol.phi, 1e-8 * scale));
        }
        let cert = categorize(&p.k()).unwrap().certificate.expect("nonsingular certificate");
        let (v1, v2) = (&cert[..n], &cert[n..]);
        for x in iterates {
            let bound = x.matvec(v1);
            for (i, lhs) in bound.iter().enumerate() {
                prop_assert!(lhs <= &(v2[i] + 1e-9 * (1.0 + v2[i].abs())));
            }
        }
    }

    /// Doubling squeezes both solution factors upward toward their limits.
    #[test]
    fn doubling_iterates_sandwich_their_limits(
        seed in any::<u64>(),
        n in 2usize..5,
        m in 2usize..5,
    ) {
        let p = random_problem(&spec_for(GenCategory::Nonsingular, n, m, seed)).unwrap();
        let mut opts = SolverOptions::with_method(SolveMethod::Doubling);
        opts.record_iterates = true;
        let sol = mare_core::solve(&p, &opts).unwrap();
        let primal = sol.log.iterates.as_ref().expect("primal iterates");
        let dual = sol.log.iterates_dual.as_ref().expect("dual iterates");
        let scale = sol.phi.max_abs().max(1.0);
        for pair in primal.windows(2) {
            prop_assert!(dominated_by(&pair[0], &pair[1], 1e-10 * scale));
        }
        for x in primal {
            prop_assert!(dominated_by(x, &sol.phi, 1e-10 * scale));
        }
        let psi = sol.psi.as_ref().expect("doubling computes the dual");
        for pair in dual.windows(2) {
            prop_assert!(dominated_by(&pair[0], &pair[1], 1e-10 * scale));
        }
        for y in dual {
            prop_assert!(dominated_by(y, psi, 1e-10 * scale));
        }
    }

    /// Every doubling step keeps `I - G H` a nonsingular M-matrix.
    #[test]
    fn doubling_coupling_stays_nonsingular(
        seed in any::<u64>(),
        n in 2usize..5,
        m in 2usize..5,
    ) {
        let p = random_problem(&spec_for(GenCategory::Nonsingular, n, m, seed)).unwrap();
        let mut opts = SolverOptions::with_method(SolveMethod::Doubling);
        opts.record_iterates = true;
        let sol = mare_core::solve(&p, &opts).unwrap();
        let primal = sol.log.iterates.as_ref().unwrap();
        let dual = sol.log.iterates_dual.as_ref().unwrap();
        for (h, g) in primal.iter().zip(dual) {
            let coupling = DenseMatrix::identity(n).sub(&g.mul(h));
            let kind = categorize(&coupling).unwrap();
            prop_assert!(kind.is_m && !kind.singular, "I - G H degenerated");
        }
    }

    /// All four methods land on the same minimal solution.
    #[test]
    fn methods_agree_on_random_nonsingular_problems(
        seed in any::<u64>(),
        n in 2usize..8,
        m in 2usize..8,
    ) {
        let p = random_problem(&spec_for(GenCategory::Nonsingular, n, m, seed)).unwrap();
        let mut solutions = Vec::new();
        for method in [
            SolveMethod::FixedPoint,
            SolveMethod::Newton,
            SolveMethod::Doubling,
            SolveMethod::Schur,
        ] {
            let mut opts = SolverOptions::with_method(method);
            opts.max_iter = Some(100_000);
            let sol = mare_core::solve(&p, &opts).unwrap();
            solutions.push(sol.phi);
        }
        for i in 0..solutions.len() {
            for j in (i + 1)..solutions.len() {
                prop_assert!(
                    solutions[i].max_abs_diff(&solutions[j]) <= 1e-8,
                    "methods {i} and {j} disagree"
                );
            }
        }
    }

    /// A nonzero gap is equivalent to a simple zero eigenvalue of H.
    #[test]
    fn gap_sign_matches_zero_multiplicity(
        seed in any::<u64>(),
        n in 1usize..4,
        m in 1usize..4,
        reducible in any::<bool>(),
    ) {
        let category = if reducible {
            GenCategory::ReducibleSingularRegular
        } else {
            GenCategory::IrreducibleSingular
        };
        let p = random_problem(&spec_for(category, n, m, seed)).unwrap();
        let nd = analysis::null_data(&p).unwrap();
        let band = ZERO_CLUSTER_REL_TOL * p.h_matrix().norm_inf().max(1.0);
        let es = analysis::zero_eigen_structure(&p, band).unwrap();
        prop_assert_eq!(nd.gap.abs() > nd.gap_band(), es.r == 1);
    }

    /// Scaling by one is the identity perturbation.
    #[test]
    fn unit_alpha_perturbation_is_identity(
        seed in any::<u64>(),
        n in 1usize..4,
        m in 1usize..4,
    ) {
        let p = random_problem(&spec_for(GenCategory::Nonsingular, n, m, seed)).unwrap();
        let q = perturb_alpha(&p, 1.0);
        prop_assert_eq!(p, q);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Matrix files survive a write/parse cycle exactly.
    #[test]
    fn matrix_file_round_trip(
        seed in any::<u64>(),
        n in 1usize..5,
        m in 1usize..5,
    ) {
        let spec = spec_for(GenCategory::ReducibleSingularRegular, n, m, seed);
        let k = random_generator_k(&spec).unwrap();
        let file = MatrixFile::new(k, n);
        let reparsed = MatrixFile::parse(&file.render()).unwrap();
        prop_assert_eq!(&file, &reparsed);
    }
}
