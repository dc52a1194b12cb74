//! End-to-end acceptance gate for the solver stack.
//!
//! Each test covers one numbered criterion and prints a single
//! `criterion N: PASS`/`FAIL` line (run with `--nocapture` to see them
//! all); the assertion message repeats the failure detail. Tolerances are
//! pinned as constants next to the checks that use them.

use std::fs;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use mare_core::analysis::{self, ZERO_CLUSTER_REL_TOL};
use mare_core::linalg::eigenvalues;
use mare_core::mmatrix::categorize;
use mare_core::solvers::{schur_select, solve, SolveMethod, SolverError, SolverOptions};
use mare_core::{
    disc_epsilon, fixture, random_problem, CaseLabel, DenseMatrix, FixtureId, GenCategory,
    GenSpec, MatrixFile, RiccatiProblem, SplitMix64,
};

const ALL_METHODS: [SolveMethod; 4] = [
    SolveMethod::FixedPoint,
    SolveMethod::Newton,
    SolveMethod::Doubling,
    SolveMethod::Schur,
];

/// Prints the per-criterion verdict line and fails the test on any
/// recorded violation.
fn report(criterion: &str, detail: &str, failures: &[String]) {
    if failures.is_empty() {
        println!("{criterion}: PASS ({detail})");
    } else {
        println!("{criterion}: FAIL ({})", failures.join("; "));
    }
    assert!(failures.is_empty(), "{criterion}: {}", failures.join("; "));
}

/// Entrywise `a <= b + slack`.
fn dominated_by(a: &DenseMatrix, b: &DenseMatrix, slack: f64) -> bool {
    assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()));
    (0..a.rows()).all(|i| (0..a.cols()).all(|j| a[(i, j)] <= b[(i, j)] + slack))
}

#[test]
fn criterion_01_substochastic_fixture_all_methods() {
    const PHI_TOL: f64 = 1e-10;
    const EIG_TOL: f64 = 1e-10;
    const BUDGET: Duration = Duration::from_secs(1);

    let start = Instant::now();
    let fx = fixture(FixtureId::Ex1);
    let phi_star = fx.expected.phi.as_ref().unwrap();
    let mut failures = Vec::new();

    for method in ALL_METHODS {
        let opts = SolverOptions::with_method(method);
        match solve(&fx.problem, &opts) {
            Ok(sol) => {
                let err = sol.phi.max_abs_diff(phi_star);
                if err > PHI_TOL {
                    failures.push(format!("{method:?} error {err:.3e} above {PHI_TOL:.0e}"));
                }
            }
            Err(e) => failures.push(format!("{method:?} failed: {e}")),
        }
    }

    let eig = eigenvalues(&fx.problem.h_matrix()).unwrap();
    for (z, want) in eig.iter().zip([2.0, 1.0, 0.0, -3.0]) {
        if (z.re - want).abs() > EIG_TOL || z.im.abs() > EIG_TOL {
            failures.push(format!("eigenvalue {z:?} should be {want}"));
        }
    }

    match analysis::classify_case(&fx.problem) {
        Ok(CaseLabel::CaseII) => {}
        other => failures.push(format!("case {other:?}, expected CaseII")),
    }

    let elapsed = start.elapsed();
    if elapsed > BUDGET {
        failures.push(format!("took {elapsed:?}, budget {BUDGET:?}"));
    }
    report(
        "criterion 1",
        &format!("four methods within {PHI_TOL:.0e}, eigenvalues within {EIG_TOL:.0e}, case II, {elapsed:?}"),
        &failures,
    );
}

#[test]
fn criterion_02_stochastic_fixture_and_second_solution() {
    const PHI_TOL: f64 = 1e-10;

    let fx = fixture(FixtureId::Ex2);
    let phi_star = fx.expected.phi.as_ref().unwrap();
    let mut failures = Vec::new();

    let sol = solve(&fx.problem, &SolverOptions::default()).unwrap();
    let err = sol.phi.max_abs_diff(phi_star);
    if err > PHI_TOL {
        failures.push(format!("minimal solution error {err:.3e}"));
    }

    // The non-minimal positive solution sits on the eigenvalues {3, -1}
    // of H; selection indices refer to the descending eigenvalue order.
    let eig = eigenvalues(&fx.problem.h_matrix()).unwrap();
    let position = |target: f64| {
        eig.iter()
            .position(|z| (z.re - target).abs() < 1e-6 && z.im.abs() < 1e-6)
            .unwrap_or_else(|| panic!("eigenvalue {target} not found in {eig:?}"))
    };
    let selection = [position(3.0), position(-1.0)];
    let second = DenseMatrix::from_rows(&[&[2.0, 2.0], &[1.0, 1.0]]);
    match schur_select(&fx.problem, &selection) {
        Ok(x) => {
            let err = x.max_abs_diff(&second);
            if err > PHI_TOL {
                failures.push(format!("selected solution error {err:.3e}"));
            }
        }
        Err(e) => failures.push(format!("schur_select failed: {e}")),
    }

    match analysis::second_solution_count_check(&fx.problem) {
        Ok(rep) => {
            if rep.positive_count != 2 {
                failures.push(format!("{} positive solutions, expected 2", rep.positive_count));
            }
            if rep.selections_tested != 6 {
                failures.push(format!("{} selections tested, expected 6", rep.selections_tested));
            }
        }
        Err(e) => failures.push(format!("enumeration failed: {e}")),
    }

    match analysis::classify_case(&fx.problem) {
        Ok(CaseLabel::CaseI) => {}
        other => failures.push(format!("case {other:?}, expected CaseI")),
    }

    report(
        "criterion 2",
        "minimal and selected solutions match, exactly 2 positive solutions, case I",
        &failures,
    );
}

#[test]
fn criterion_03_critical_fixture_structure() {
    const PHI_TOL: f64 = 1e-10;
    const EQUALITY_TOL: f64 = 1e-8;

    let fx = fixture(FixtureId::Ex3);
    let phi_star = fx.expected.phi.as_ref().unwrap();
    let mut failures = Vec::new();

    let sol = solve(&fx.problem, &SolverOptions::with_method(SolveMethod::Schur)).unwrap();
    let err = sol.phi.max_abs_diff(phi_star);
    if err > PHI_TOL {
        failures.push(format!("schur solution error {err:.3e}"));
    }

    let band = ZERO_CLUSTER_REL_TOL * fx.problem.h_matrix().norm_inf().max(1.0);
    match analysis::zero_eigen_structure(&fx.problem, band) {
        Ok(es) => {
            if es.r != 2 || es.eigvec_count != 1 {
                failures.push(format!(
                    "zero structure r={} eigvec_count={}, expected r=2 with 1 eigenvector",
                    es.r, es.eigvec_count
                ));
            }
        }
        Err(e) => failures.push(format!("eigen structure failed: {e}")),
    }

    match analysis::classify_case(&fx.problem) {
        Ok(CaseLabel::CaseIII) => {}
        other => failures.push(format!("case {other:?}, expected CaseIII")),
    }

    let nd = analysis::null_data(&fx.problem).unwrap();
    let psi = sol.psi.as_ref().expect("schur method returns the dual factor");
    let phi_v1 = sol.phi.matvec(&nd.v1);
    let psi_v2 = psi.matvec(&nd.v2);
    for i in 0..fx.problem.m() {
        if (phi_v1[i] - nd.v2[i]).abs() > EQUALITY_TOL {
            failures.push(format!("Phi v1 != v2 at row {i}"));
        }
    }
    for j in 0..fx.problem.n() {
        if (psi_v2[j] - nd.v1[j]).abs() > EQUALITY_TOL {
            failures.push(format!("Psi v2 != v1 at row {j}"));
        }
    }

    let coupling = DenseMatrix::identity(fx.problem.m()).sub(&sol.phi.mul(psi));
    match categorize(&coupling) {
        Ok(kind) if kind.singular => {}
        Ok(_) => failures.push("I - Phi Psi categorized nonsingular".into()),
        Err(e) => failures.push(format!("coupling classification failed: {e}")),
    }

    report(
        "criterion 3",
        "schur solution, double zero with one eigenvector, case III equalities, singular coupling",
        &failures,
    );
}

#[test]
fn criterion_04_irregular_fixture_rejected() {
    let fx = fixture(FixtureId::Km);
    let mut failures = Vec::new();
    for method in ALL_METHODS {
        match solve(&fx.problem, &SolverOptions::with_method(method)) {
            Err(SolverError::NotRegular) => {}
            Err(e) => failures.push(format!("{method:?} wrong error: {e}")),
            Ok(_) => failures.push(format!("{method:?} returned a solution")),
        }
    }
    report(
        "criterion 4",
        "all methods reject the irregular problem at validation",
        &failures,
    );
}

#[test]
fn criterion_05_scalar_closed_form() {
    const ORACLE_TOL: f64 = 1e-12;

    // Scalar equation x^2 - 5x + 1 = 0 written in minimal-root form; the
    // oracle is the quadratic formula evaluated independently here.
    let oracle = (5.0 - 21.0_f64.sqrt()) / 2.0;
    let fx = fixture(FixtureId::Sc1);
    let mut failures = Vec::new();
    for method in ALL_METHODS {
        let mut opts = SolverOptions::with_method(method);
        opts.tol = 1e-14;
        opts.max_iter = Some(1_000_000);
        match solve(&fx.problem, &opts) {
            Ok(sol) => {
                let err = (sol.phi[(0, 0)] - oracle).abs();
                if err > ORACLE_TOL {
                    failures.push(format!("{method:?} error {err:.3e} above {ORACLE_TOL:.0e}"));
                }
            }
            Err(e) => failures.push(format!("{method:?} failed: {e}")),
        }
    }
    report(
        "criterion 5",
        &format!("all methods within {ORACLE_TOL:.0e} of (5 - sqrt(21))/2"),
        &failures,
    );
}

#[test]
fn criterion_06_discontinuity_fixtures() {
    const PHI_TOL: f64 = 1e-10;
    const EPS: f64 = 1e-3;

    let mut failures = Vec::new();
    let opts = SolverOptions::with_method(SolveMethod::Newton);

    for id in [FixtureId::Disc1, FixtureId::Disc2] {
        let fx = fixture(id);
        let phi_star = fx.expected.phi.as_ref().unwrap();
        match solve(&fx.problem, &opts) {
            Ok(sol) => {
                let err = sol.phi.max_abs_diff(phi_star);
                if err > PHI_TOL {
                    failures.push(format!("{id:?} base error {err:.3e}"));
                }
            }
            Err(e) => failures.push(format!("{id:?} base failed: {e}")),
        }

        let (perturbed, limit) = disc_epsilon(id, EPS);
        match solve(&perturbed, &opts) {
            Ok(sol) => {
                let err = sol.phi.max_abs_diff(&limit);
                if err > PHI_TOL {
                    failures.push(format!("{id:?} eps error {err:.3e}"));
                }
            }
            Err(e) => failures.push(format!("{id:?} eps failed: {e}")),
        }
    }

    report(
        "criterion 6",
        &format!("base and eps={EPS:.0e} solutions land on both sides of the jump"),
        &failures,
    );
}

/// One problem's worth of criterion 7 checks.
///
/// Recorded iterates belong to the zero-row-reduced problem, so the
/// monotonicity, sandwich, and certificate checks run on that problem and
/// its own certificate; property verification runs on the original.
fn check_random_problem(
    p: &RiccatiProblem,
    category: GenCategory,
    seed: u64,
    failures: &mut Vec<String>,
    overflow_rescues: &mut usize,
) {
    const SANDWICH_SLACK: f64 = 1e-10;
    const MONOTONE_SLACK: f64 = 1e-12;
    const CERT_SLACK: f64 = 1e-9;

    let tag = format!("{category:?} seed {seed}");
    let kind = categorize(&p.k()).unwrap();
    let Some(cert) = kind.certificate.clone() else {
        failures.push(format!("{tag}: no regularity certificate"));
        return;
    };

    let reduction = p.reduce_zero_diagonal().unwrap();
    let q = &reduction.problem;
    let q_kind = categorize(&q.k()).unwrap();
    let Some(q_cert) = q_kind.certificate.clone() else {
        failures.push(format!("{tag}: reduced problem lost its certificate"));
        return;
    };

    let mut opts = SolverOptions::with_method(SolveMethod::Doubling);
    opts.record_iterates = true;
    let doubling_sol = match solve(q, &opts) {
        Ok(sol) => Some(sol),
        Err(SolverError::NearSingularIGH) => {
            // The doubling kernels overflowed on a hard draw; the direct
            // solve below still supplies a solution to verify.
            *overflow_rescues += 1;
            None
        }
        Err(e) => {
            failures.push(format!("{tag}: doubling failed: {e}"));
            None
        }
    };
    if let Some(sol) = &doubling_sol {
        let scale = 1.0 + sol.phi.max_abs();
        let primal = sol.log.iterates.as_ref().unwrap();
        if primal
            .windows(2)
            .any(|w| !dominated_by(&w[0], &w[1], MONOTONE_SLACK * scale))
        {
            failures.push(format!("{tag}: doubling primal iterates not monotone"));
        }
        if primal
            .iter()
            .any(|x| !dominated_by(x, &sol.phi, SANDWICH_SLACK * scale))
        {
            failures.push(format!("{tag}: doubling primal iterate above its limit"));
        }
        let psi = sol.psi.as_ref().unwrap();
        let dual = sol.log.iterates_dual.as_ref().unwrap();
        if dual
            .windows(2)
            .any(|w| !dominated_by(&w[0], &w[1], MONOTONE_SLACK * scale))
        {
            failures.push(format!("{tag}: doubling dual iterates not monotone"));
        }
        if dual
            .iter()
            .any(|x| !dominated_by(x, psi, SANDWICH_SLACK * scale))
        {
            failures.push(format!("{tag}: doubling dual iterate above its limit"));
        }
    }

    let mut fp_opts = SolverOptions::with_method(SolveMethod::FixedPoint);
    fp_opts.record_iterates = true;
    fp_opts.tol = 1e-9;
    fp_opts.max_iter = Some(300_000);
    let fp_iterates = match solve(q, &fp_opts) {
        Ok(sol) => sol.log.iterates,
        Err(SolverError::MaxIterExceeded { log, .. }) => log.iterates,
        Err(e) => {
            failures.push(format!("{tag}: fixed point failed: {e}"));
            None
        }
    };
    if let Some(iterates) = fp_iterates {
        let scale = 1.0 + iterates.last().map_or(0.0, |x| x.max_abs());
        if iterates
            .windows(2)
            .any(|w| !dominated_by(&w[0], &w[1], MONOTONE_SLACK * scale))
        {
            failures.push(format!("{tag}: fixed-point iterates not monotone"));
        }
        let (v1, v2) = q_cert.split_at(q.n());
        let slack = CERT_SLACK * (1.0 + v2.iter().fold(0.0_f64, |a, &x| a.max(x)));
        'cert: for x in &iterates {
            let lhs = x.matvec(v1);
            for i in 0..q.m() {
                if lhs[i] > v2[i] + slack {
                    failures.push(format!("{tag}: iterate breaks the certificate bound"));
                    break 'cert;
                }
            }
        }
    }

    // Property verification needs a solution shaped like the original
    // problem; the doubling run above already is one when no row was
    // removed.
    let sol = match doubling_sol {
        Some(sol) if reduction.r == 0 => sol,
        _ => {
            let fallback = solve(p, &SolverOptions::default())
                .or_else(|_| solve(p, &SolverOptions::with_method(SolveMethod::Schur)));
            match fallback {
                Ok(sol) => sol,
                Err(e) => {
                    failures.push(format!("{tag}: no method produced a solution: {e}"));
                    return;
                }
            }
        }
    };

    let nd = if kind.singular {
        analysis::null_data(p).ok()
    } else {
        None
    };
    let rep = analysis::verify_properties(p, &sol, &cert, nd.as_ref());
    if !rep.all_passed() {
        let names: Vec<&str> = rep.failed().iter().map(|c| c.name).collect();
        failures.push(format!("{tag}: property checks failed: {names:?}"));
    }

    if let Some(nd) = &nd {
        let band = ZERO_CLUSTER_REL_TOL * p.h_matrix().norm_inf().max(1.0);
        match analysis::zero_eigen_structure(p, band) {
            Ok(es) => {
                if (nd.gap.abs() > nd.gap_band()) != (es.r == 1) {
                    failures.push(format!("{tag}: gap sign and zero multiplicity disagree"));
                }
            }
            Err(e) => failures.push(format!("{tag}: eigen structure failed: {e}")),
        }
    }
}

#[test]
fn criterion_07_property_suite_on_seeded_problems() {
    const BUDGET: Duration = Duration::from_secs(60);

    let start = Instant::now();
    let mut failures = Vec::new();
    let mut redraws = 0usize;
    let mut overflow_rescues = 0usize;
    let plan = [
        (GenCategory::Nonsingular, 100usize, 700u64),
        (GenCategory::IrreducibleSingular, 50, 701),
        (GenCategory::ReducibleSingularRegular, 50, 702),
    ];

    for (category, count, stream_seed) in plan {
        let mut rng = SplitMix64::new(stream_seed);
        let mut done = 0;
        while done < count {
            assert!(redraws < 1_000, "generator keeps missing the target population");
            let seed = rng.next_u64();
            let n = 2 + rng.below(3);
            let m = 2 + rng.below(3);
            let spec = GenSpec::for_category(category, n, m, seed);
            let p = match random_problem(&spec) {
                Ok(p) => p,
                Err(_) => {
                    redraws += 1;
                    continue;
                }
            };
            if category != GenCategory::Nonsingular {
                // The singular populations under test have a simple zero
                // (nonzero gap); boundary draws are redrawn, not checked.
                match analysis::classify_case(&p) {
                    Ok(CaseLabel::CaseI | CaseLabel::CaseII) => {}
                    _ => {
                        redraws += 1;
                        continue;
                    }
                }
            }
            done += 1;
            check_random_problem(&p, category, seed, &mut failures, &mut overflow_rescues);
        }
    }

    let elapsed = start.elapsed();
    if elapsed > BUDGET {
        failures.push(format!("took {elapsed:?}, budget {BUDGET:?}"));
    }
    report(
        "criterion 7",
        &format!(
            "200 problems, 0 violations, {redraws} redraws, \
             {overflow_rescues} doubling overflows rescued, {elapsed:?}"
        ),
        &failures,
    );
}

#[test]
fn criterion_08_convergence_rates() {
    const NEWTON_FLOOR: f64 = 1e-13;
    const DIGIT_FACTOR: f64 = 1.5;
    const STEP_WINDOW: (f64, f64) = (1e-14, 1e-2);
    const RATE_SLACK: f64 = 0.05;
    const TRIALS: usize = 20;

    let mut failures = Vec::new();
    let mut rng = SplitMix64::new(4096);

    for trial in 0..TRIALS {
        let seed = rng.next_u64();
        let n = 2 + rng.below(4);
        let m = 2 + rng.below(4);
        let spec = GenSpec::for_category(GenCategory::Nonsingular, n, m, seed);
        let p = random_problem(&spec).unwrap();
        let tag = format!("trial {trial} seed {seed}");

        // Quadratic convergence doubles the correct digits; the floor
        // clause accepts residuals already at rounding level.
        let sol = solve(&p, &SolverOptions::with_method(SolveMethod::Newton)).unwrap();
        let hist = &sol.log.residual_history;
        let tail = &hist[hist.len().saturating_sub(3)..];
        for pair in tail.windows(2) {
            let (prev, next) = (pair[0], pair[1]);
            if next <= NEWTON_FLOOR {
                continue;
            }
            let digits_prev = -prev.log10();
            let digits_next = -next.log10();
            if digits_next < DIGIT_FACTOR * digits_prev {
                failures.push(format!(
                    "{tag}: newton digits {digits_prev:.2} -> {digits_next:.2} below factor {DIGIT_FACTOR}"
                ));
            }
        }

        // Doubling step k behaves like rate^(2^k); every windowed step
        // must stay under the computed Cayley rate bound plus slack.
        let sol = solve(&p, &SolverOptions::with_method(SolveMethod::Doubling)).unwrap();
        let Some(bound) = sol.log.rate_bound else {
            failures.push(format!("{tag}: doubling rate bound unavailable"));
            continue;
        };
        let hist = &sol.log.residual_history;
        let mut usable = 0;
        for (k, &step) in hist[..hist.len() - 1].iter().enumerate() {
            if step < STEP_WINDOW.0 || step > STEP_WINDOW.1 {
                continue;
            }
            usable += 1;
            let root = step.powf(1.0 / 2f64.powi(k as i32));
            if root > bound + RATE_SLACK {
                failures.push(format!(
                    "{tag}: doubling root {root:.3} above bound {bound:.3} + {RATE_SLACK}"
                ));
            }
        }
        if usable == 0 {
            failures.push(format!("{tag}: no doubling step inside the measurement window"));
        }
    }

    report(
        "criterion 8",
        &format!("{TRIALS} problems: newton digit-doubling and doubling rate bounds hold"),
        &failures,
    );
}

#[test]
fn criterion_09_conjecture_hunt() {
    const TRIALS: usize = 1000;
    const MAX_SIZE: usize = 4;
    const BUDGET: Duration = Duration::from_secs(300);

    let start = Instant::now();
    let mut failures = Vec::new();
    let mut rng = SplitMix64::new(99);
    let mut margins: Vec<f64> = Vec::new();
    let mut skipped = 0usize;
    let mut generation_failures = 0usize;
    let mut solve_failures = 0usize;
    let mut direct_rescues = 0usize;
    let mut counterexamples = 0usize;
    let out_dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("hunt-counterexamples");

    for _ in 0..TRIALS {
        let seed = rng.next_u64();
        let n = 1 + rng.below(MAX_SIZE);
        let m = 1 + rng.below(MAX_SIZE);
        let spec = GenSpec::for_category(GenCategory::ReducibleSingularRegular, n, m, seed);
        let p = match random_problem(&spec) {
            Ok(p) => p,
            Err(_) => {
                generation_failures += 1;
                continue;
            }
        };
        match analysis::classify_case(&p) {
            Ok(CaseLabel::CaseI | CaseLabel::CaseII) => {}
            _ => {
                skipped += 1;
                continue;
            }
        }
        let sol = match solve(&p, &SolverOptions::default()) {
            Ok(sol) => sol,
            Err(_) => {
                // The doubling kernels can overflow on hard draws; the
                // direct method still measures the margin for those seeds.
                match solve(&p, &SolverOptions::with_method(SolveMethod::Schur)) {
                    Ok(sol) => {
                        direct_rescues += 1;
                        sol
                    }
                    Err(_) => {
                        solve_failures += 1;
                        continue;
                    }
                }
            }
        };
        let probe = match analysis::conjecture_probe(&p, &sol) {
            Ok(probe) => probe,
            Err(e) => {
                failures.push(format!("seed {seed}: probe refused a filtered problem: {e}"));
                continue;
            }
        };
        margins.push(probe.margin);
        if probe.margin <= 0.0 {
            counterexamples += 1;
            fs::create_dir_all(&out_dir).unwrap();
            let path = out_dir.join(format!("counterexample-{seed}.mare"));
            let body = format!(
                "# counterexample candidate: margin = {:.6e}, seed = {seed}\n{}",
                probe.margin,
                MatrixFile::from_problem(&p).render()
            );
            fs::write(&path, body).unwrap();
            println!("recorded counterexample candidate at {}", path.display());
        }
    }

    let elapsed = start.elapsed();
    if margins.len() + skipped + generation_failures + solve_failures != TRIALS {
        failures.push("trial accounting does not add up".into());
    }
    if solve_failures > 0 {
        failures.push(format!("{solve_failures} solver failures on nonzero-gap problems"));
    }
    if elapsed > BUDGET {
        failures.push(format!("took {elapsed:?}, budget {BUDGET:?}"));
    }
    let min_margin = margins.iter().copied().fold(f64::INFINITY, f64::min);
    if counterexamples > 0 {
        // A reportable research finding, deliberately not a test failure.
        println!(
            "research finding: {counterexamples} nonpositive margins recorded under {}",
            out_dir.display()
        );
    }
    report(
        "criterion 9",
        &format!(
            "{} margins recorded (min {min_margin:.3e}), {skipped} zero-gap skips, \
             {generation_failures} generation failures, {direct_rescues} direct rescues, \
             {counterexamples} counterexamples, {elapsed:?}",
            margins.len()
        ),
        &failures,
    );
}

#[test]
fn criterion_10_reduction_round_trip() {
    const RESIDUAL_TOL: f64 = 1e-10;

    // a_00 = 0 and the matching row of K vanishes, so the first row of
    // the A block is removable; keeping row 1 first makes the embedding
    // permutation nontrivial.
    let p = RiccatiProblem::new(
        DenseMatrix::from_rows(&[&[0.0, 0.0], &[-1.0, 3.0]]),
        DenseMatrix::from_rows(&[&[0.0, 0.0], &[1.0, 0.0]]),
        DenseMatrix::identity(2),
        DenseMatrix::from_rows(&[&[2.0, -1.0], &[-1.0, 2.0]]),
    )
    .unwrap();
    let mut failures = Vec::new();

    let kind = categorize(&p.k()).unwrap();
    if !(kind.is_m && kind.singular && kind.regular && kind.null_rank == 1) {
        failures.push(format!("unexpected K classification: {kind:?}"));
    }

    let reduction = p.reduce_zero_diagonal().unwrap();
    if reduction.r != 1 || reduction.permutation != vec![1, 0] {
        failures.push(format!(
            "reduction removed {} rows with permutation {:?}, expected 1 row and [1, 0]",
            reduction.r, reduction.permutation
        ));
    }

    match solve(&reduction.problem, &SolverOptions::default()) {
        Ok(sol) => {
            let phi = p.embed_solution(&reduction, &sol.phi);
            if !(phi[(0, 0)] == 0.0 && phi[(0, 1)] == 0.0) {
                failures.push(format!(
                    "embedded row 0 is [{:.3e}, {:.3e}], expected exact zeros",
                    phi[(0, 0)],
                    phi[(0, 1)]
                ));
            }
            let residual = p.relative_residual(&phi);
            if residual > RESIDUAL_TOL {
                failures.push(format!("embedded residual {residual:.3e}"));
            }
        }
        Err(e) => failures.push(format!("reduced solve failed: {e}")),
    }

    report(
        "criterion 10",
        "reduce, solve, embed restores an exact zero row with a tiny residual",
        &failures,
    );
}
