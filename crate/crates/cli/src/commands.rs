//! Implementations of the five subcommands.

use std::fmt;
use std::process::ExitCode;

use mare_core::analysis::{self, ZERO_CLUSTER_REL_TOL};
use mare_core::io::{FileError, MatrixFile};
use mare_core::linalg::eigenvalues;
use mare_core::matrix::sort_eigenvalues_desc;
use mare_core::mmatrix::categorize;
use mare_core::{
    random_generator_k, CaseLabel, ComplexScalar, GenCategory, GenSpec, GeneratorError,
    MatrixKind, RiccatiError, RiccatiProblem, Solution, SolverError, SolverOptions, SplitMix64,
};

use crate::args::{AnalyzeArgs, CompareArgs, GenArgs, HuntArgs, MethodArg, NumericArgs, SolveArgs};
use crate::report::{format_eigenvalues, format_matrix, MachineReport};

/// Methods compared against each other must agree to this tolerance.
const COMPARISON_TOL: f64 = 1e-6;
/// Buckets in the hunt margin histogram.
const HISTOGRAM_BUCKETS: usize = 10;

/// Errors carrying the documented exit codes: 1 for usage, file, and
/// parse problems, 2 when the problem structure is rejected, 3 for
/// numerical failure.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    File(FileError),
    Problem(RiccatiError),
    Solver(SolverError),
    Generation(GeneratorError),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(text) => write!(f, "{text}"),
            CliError::File(e) => write!(f, "{e}"),
            CliError::Problem(e) => write!(f, "{e}"),
            CliError::Solver(e) => write!(f, "{e}"),
            CliError::Generation(e) => write!(f, "{e}"),
        }
    }
}

impl From<FileError> for CliError {
    fn from(e: FileError) -> Self {
        CliError::File(e)
    }
}

impl From<RiccatiError> for CliError {
    fn from(e: RiccatiError) -> Self {
        CliError::Problem(e)
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        CliError::Solver(e)
    }
}

impl From<GeneratorError> for CliError {
    fn from(e: GeneratorError) -> Self {
        CliError::Generation(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::File(_) => 1,
            CliError::Problem(e) => match e {
                RiccatiError::BadShape { .. } => 1,
                RiccatiError::NotZ { .. } | RiccatiError::NotRegular => 2,
            },
            CliError::Solver(e) => match e {
                SolverError::NotMMatrix | SolverError::NotRegular => 2,
                SolverError::InvalidOptions(_) => 1,
                _ => 3,
            },
            CliError::Generation(e) => match e {
                GeneratorError::InvalidSpec(_) => 1,
                GeneratorError::GenerationFailure { .. } => 3,
            },
        }
    }
}

/// Tolerance precedence: flag, then MARE_DEFAULT_TOL, then the solver
/// default.
fn resolve_tol(flag: Option<f64>) -> Result<Option<f64>, CliError> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("MARE_DEFAULT_TOL") {
        Ok(text) => {
            let value: f64 = text.trim().parse().map_err(|_| {
                CliError::Usage(format!("MARE_DEFAULT_TOL is not a number: {text:?}"))
            })?;
            Ok(Some(value))
        }
        Err(_) => Ok(None),
    }
}

fn build_options(method: MethodArg, numerics: &NumericArgs) -> Result<SolverOptions, CliError> {
    let mut opts = SolverOptions::with_method(method.into());
    if let Some(tol) = resolve_tol(numerics.tol)? {
        opts.tol = tol;
    }
    opts.max_iter = numerics.max_iter;
    opts.alpha = numerics.alpha;
    opts.beta = numerics.beta;
    opts.gamma = numerics.gamma;
    if let Some(delta) = numerics.shift_delta {
        opts.shift_delta = delta;
    }
    Ok(opts)
}

fn load_problem(path: &std::path::Path) -> Result<(MatrixFile, RiccatiProblem), CliError> {
    let file = MatrixFile::read(path)?;
    let problem = file.to_problem()?;
    Ok((file, problem))
}

fn describe_kind(kind: &MatrixKind) -> String {
    if !kind.is_z {
        return "not a Z-matrix".into();
    }
    if !kind.is_m {
        return "a Z-matrix but not an M-matrix".into();
    }
    let mut text = String::from(if kind.singular {
        "singular"
    } else {
        "nonsingular"
    });
    text.push_str(if kind.irreducible {
        " irreducible"
    } else {
        " reducible"
    });
    text.push_str(" M-matrix");
    if kind.singular {
        text.push_str(if kind.regular {
            ", regular"
        } else {
            ", not regular"
        });
        text.push_str(&format!(", null rank {}", kind.null_rank));
    }
    text
}

fn push_kind(report: &mut MachineReport, kind: &MatrixKind) {
    report.push_bool("k.is_z", kind.is_z);
    report.push_bool("k.is_m", kind.is_m);
    report.push_bool("k.singular", kind.singular);
    report.push_bool("k.irreducible", kind.irreducible);
    report.push_bool("k.regular", kind.regular);
    report.push_int("k.null_rank", kind.null_rank);
    if let Some(cert) = &kind.certificate {
        report.push_vector("k.certificate", cert);
    }
}

fn sorted_h_eigenvalues(p: &RiccatiProblem) -> Option<Vec<ComplexScalar>> {
    let mut lam = eigenvalues(&p.h_matrix()).ok()?;
    sort_eigenvalues_desc(&mut lam);
    Some(lam)
}

pub fn cmd_solve(args: &SolveArgs) -> Result<ExitCode, CliError> {
    let (_, problem) = load_problem(&args.input)?;
    let opts = build_options(args.method, &args.numerics)?;
    let sol = mare_core::solve(&problem, &opts)?;

    let kind = categorize(&problem.k()).ok();
    let case = analysis::classify_case(&problem).ok();
    let gap = analysis::null_data(&problem).ok().map(|nd| nd.gap);
    let lam = sorted_h_eigenvalues(&problem);
    let probe = analysis::conjecture_probe(&problem, &sol).ok();

    if args.machine {
        let mut report = MachineReport::new("solve");
        report.push_text("method", sol.log.method.name());
        report.push_int("n", problem.n());
        report.push_int("m", problem.m());
        if let Some(kind) = &kind {
            push_kind(&mut report, kind);
        }
        if let Some(case) = &case {
            report.push_text("case", &case.to_string());
        }
        if let Some(gap) = gap {
            report.push_float("gap", gap);
        }
        if let Some(lam) = &lam {
            report.push_complex_list("h_eig", lam);
        }
        report.push_matrix("phi", &sol.phi);
        if let Some(psi) = &sol.psi {
            report.push_matrix("psi", psi);
        }
        report.push_matrix("r", &sol.r);
        if let Some(s) = &sol.s {
            report.push_matrix("s", s);
        }
        report.push_float("residual_phi", sol.residual_phi);
        if let Some(res) = sol.residual_psi {
            report.push_float("residual_psi", res);
        }
        if let Some(probe) = &probe {
            report.push_float("rho_phi_psi", probe.rho);
            report.push_float("margin", probe.margin);
        }
        report.push_int("iterations", sol.log.iterations);
        report.push_float("rate_estimate", sol.log.rate_estimate);
        report.push_vector("shift", &sol.log.shifts_used);
        if let Some(bound) = sol.log.rate_bound {
            report.push_float("rate_bound", bound);
        }
        for (i, note) in sol.log.notes.iter().enumerate() {
            report.push_text(&format!("note.{i}"), note);
        }
        print!("{}", report.render());
        return Ok(ExitCode::SUCCESS);
    }

    println!("input: {}", args.input.display());
    println!("problem: n = {}, m = {}", problem.n(), problem.m());
    if let Some(kind) = &kind {
        println!("K: {}", describe_kind(kind));
    }
    match (case, gap) {
        (Some(case), Some(gap)) => println!("case: {case} (gap = {gap:.6e})"),
        (Some(case), None) => println!("case: {case}"),
        _ => {}
    }
    if let Some(lam) = &lam {
        println!("eigenvalues of H:");
        print!("{}", format_eigenvalues(lam));
    }
    println!("Phi (minimal solution):");
    print!("{}", format_matrix(&sol.phi));
    if let Some(psi) = &sol.psi {
        println!("Psi (dual minimal solution):");
        print!("{}", format_matrix(psi));
    }
    println!("R = D - C Phi:");
    print!("{}", format_matrix(&sol.r));
    if let Some(s) = &sol.s {
        println!("S = A - B Psi:");
        print!("{}", format_matrix(s));
    }
    match sol.residual_psi {
        Some(res) => println!(
            "residuals: phi = {:.3e}, psi = {:.3e}",
            sol.residual_phi, res
        ),
        None => println!("residuals: phi = {:.3e}", sol.residual_phi),
    }
    if let Some(probe) = &probe {
        println!(
            "rho(Phi Psi) = {:.10}, margin to one = {:.3e}",
            probe.rho, probe.margin
        );
    }
    print!(
        "method {}: {} iterations, rate estimate {:.3e}",
        sol.log.method.name(),
        sol.log.iterations,
        sol.log.rate_estimate
    );
    match sol.log.shifts_used.as_slice() {
        [gamma] => print!(", shift gamma = {gamma:.6}"),
        [alpha, beta] => print!(", shifts alpha = {alpha:.6}, beta = {beta:.6}"),
        _ => {}
    }
    if let Some(bound) = sol.log.rate_bound {
        print!(", rate bound {bound:.6}");
    }
    println!();
    if !sol.log.notes.is_empty() {
        println!("notes:");
        for note in &sol.log.notes {
            println!("  - {note}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<ExitCode, CliError> {
    let (_, problem) = load_problem(&args.input)?;
    let kind = categorize(&problem.k())
        .map_err(|e| CliError::Solver(SolverError::Linalg(e)))?;
    let case = analysis::classify_case(&problem).ok();
    let band = ZERO_CLUSTER_REL_TOL * problem.h_matrix().norm_inf().max(1.0);
    let structure = analysis::zero_eigen_structure(&problem, band).ok();
    let nd = if kind.singular {
        analysis::null_data(&problem).ok()
    } else {
        None
    };

    let verification = if args.verify {
        let opts = build_options(args.method, &args.numerics)?;
        let sol = mare_core::solve(&problem, &opts)?;
        let report = kind.certificate.as_ref().map(|cert| {
            analysis::verify_properties(&problem, &sol, cert, nd.as_ref())
        });
        Some((sol, report))
    } else {
        None
    };

    if args.machine {
        let mut report = MachineReport::new("analyze");
        report.push_int("n", problem.n());
        report.push_int("m", problem.m());
        push_kind(&mut report, &kind);
        if kind.regular {
            if let Some(case) = &case {
                report.push_text("case", &case.to_string());
            }
        }
        if let Some(es) = &structure {
            report.push_int("eig.n1", es.n1);
            report.push_int("eig.m1", es.m1);
            report.push_int("eig.r", es.r);
            report.push_int("eig.eigvec_count", es.eigvec_count);
            report.push_complex_list("lambda", &es.lambdas);
        }
        if let Some(nd) = &nd {
            report.push_float("null.gap", nd.gap);
            report.push_vector("null.u1", &nd.u1);
            report.push_vector("null.u2", &nd.u2);
            report.push_vector("null.v1", &nd.v1);
            report.push_vector("null.v2", &nd.v2);
        }
        if let Some((sol, property_report)) = &verification {
            report.push_text("verify.method", sol.log.method.name());
            report.push_float("verify.residual_phi", sol.residual_phi);
            if let Some(res) = sol.residual_psi {
                report.push_float("verify.residual_psi", res);
            }
            if let Some(property_report) = property_report {
                for check in &property_report.checks {
                    report.push_text(
                        &format!("check.{}", check.name),
                        if check.passed { "pass" } else { "fail" },
                    );
                    report.push_float(&format!("check.{}.margin", check.name), check.margin);
                }
                report.push_bool("verify.all_passed", property_report.all_passed());
            }
        }
        print!("{}", report.render());
        return Ok(ExitCode::SUCCESS);
    }

    println!("input: {}", args.input.display());
    println!("problem: n = {}, m = {}", problem.n(), problem.m());
    println!("K: {}", describe_kind(&kind));
    if kind.regular {
        if let Some(case) = &case {
            println!("case: {case}");
        }
    } else if kind.singular {
        println!("case: not applicable (the case taxonomy needs a regular K)");
    }
    if let Some(es) = &structure {
        println!(
            "eigenvalue structure: n1 = {}, m1 = {}, zero multiplicity r = {}, \
             independent zero eigenvectors = {}",
            es.n1, es.m1, es.r, es.eigvec_count
        );
        println!("eigenvalues of H:");
        print!("{}", format_eigenvalues(&es.lambdas));
    }
    if let Some(nd) = &nd {
        println!("null data: gap = {:.6e}", nd.gap);
        println!("  u1 = {:?}", nd.u1);
        println!("  u2 = {:?}", nd.u2);
        println!("  v1 = {:?}", nd.v1);
        println!("  v2 = {:?}", nd.v2);
    } else if kind.singular {
        println!("null data: not available (degenerate null space)");
    }
    if let Some((sol, property_report)) = &verification {
        match sol.residual_psi {
            Some(res) => println!(
                "verified with {}: residual phi = {:.3e}, psi = {:.3e}",
                sol.log.method.name(),
                sol.residual_phi,
                res
            ),
            None => println!(
                "verified with {}: residual phi = {:.3e}",
                sol.log.method.name(),
                sol.residual_phi
            ),
        }
        match property_report {
            Some(property_report) => {
                for check in &property_report.checks {
                    println!(
                        "  [{}] {} (margin {:.3e}): {}",
                        if check.passed { "pass" } else { "FAIL" },
                        check.name,
                        check.margin,
                        check.detail
                    );
                }
            }
            None => println!("  property checks skipped: no regularity certificate"),
        }
    }
    Ok(ExitCode::SUCCESS)
}

struct MethodRun {
    method: MethodArg,
    outcome: Result<Solution, SolverError>,
}

pub fn cmd_compare(args: &CompareArgs) -> Result<ExitCode, CliError> {
    let mut methods: Vec<MethodArg> = Vec::new();
    for &m in &args.methods {
        if !methods.contains(&m) {
            methods.push(m);
        }
    }
    if methods.len() < 2 {
        return Err(CliError::Usage(
            "compare needs at least two distinct methods".into(),
        ));
    }
    let (_, problem) = load_problem(&args.input)?;

    let mut runs = Vec::new();
    for &method in &methods {
        let opts = build_options(method, &args.numerics)?;
        runs.push(MethodRun {
            method,
            outcome: mare_core::solve(&problem, &opts),
        });
    }

    if runs.iter().all(|r| r.outcome.is_err()) {
        let first = runs
            .into_iter()
            .find_map(|r| r.outcome.err())
            .expect("all runs failed");
        return Err(CliError::Solver(first));
    }

    let mut max_diff: f64 = 0.0;
    let solved: Vec<(&MethodRun, &Solution)> = runs
        .iter()
        .filter_map(|r| r.outcome.as_ref().ok().map(|s| (r, s)))
        .collect();
    for i in 0..solved.len() {
        for j in (i + 1)..solved.len() {
            max_diff = max_diff.max(solved[i].1.phi.max_abs_diff(&solved[j].1.phi));
        }
    }

    if args.machine {
        let mut report = MachineReport::new("compare");
        report.push_int("n", problem.n());
        report.push_int("m", problem.m());
        for run in &runs {
            let name = method_name(run.method);
            match &run.outcome {
                Ok(sol) => {
                    report.push_text(&format!("compare.{name}.status"), "ok");
                    report.push_int(&format!("compare.{name}.iterations"), sol.log.iterations);
                    report.push_float(&format!("compare.{name}.residual"), sol.residual_phi);
                }
                Err(e) => {
                    report.push_text(&format!("compare.{name}.status"), "failed");
                    report.push_text(&format!("compare.{name}.error"), &e.to_string());
                }
            }
        }
        report.push_float("compare.max_pairwise_diff", max_diff);
        print!("{}", report.render());
    } else {
        println!("input: {}", args.input.display());
        println!("{:<14} {:>10}  {:>12}  status", "method", "iterations", "residual");
        for run in &runs {
            match &run.outcome {
                Ok(sol) => println!(
                    "{:<14} {:>10}  {:>12.3e}  ok",
                    method_name(run.method),
                    sol.log.iterations,
                    sol.residual_phi
                ),
                Err(e) => println!("{:<14} {:>10}  {:>12}  failed: {e}", method_name(run.method), "-", "-"),
            }
        }
        println!("max pairwise Phi difference: {max_diff:.3e}");
    }

    if solved.len() >= 2 && max_diff > COMPARISON_TOL {
        eprintln!(
            "error: methods disagree beyond {COMPARISON_TOL:.0e} (max difference {max_diff:.3e})"
        );
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn method_name(method: MethodArg) -> &'static str {
    mare_core::SolveMethod::from(method).name()
}

/// Outcome of one hunt trial.
pub enum TrialOutcome {
    /// Solved with a well-defined coupling margin.
    Margin {
        rho: f64,
        margin: f64,
        case: CaseLabel,
    },
    /// Not usable for the conjecture, with the reason.
    Skipped(String),
}

/// Solves one candidate problem and measures `1 - rho(Phi Psi)`.
///
/// Trials whose gap vanishes (the critical case) are skipped: there the
/// coupling matrices are known to be singular, so only nonzero-gap
/// problems can witness a counterexample.
pub fn hunt_trial(p: &RiccatiProblem, opts: &SolverOptions) -> TrialOutcome {
    match analysis::classify_case(p) {
        Ok(CaseLabel::CaseI) | Ok(CaseLabel::CaseII) => {}
        Ok(other) => {
            return TrialOutcome::Skipped(format!(
                "case {other}: the conjecture needs a nonzero gap"
            ))
        }
        Err(e) => return TrialOutcome::Skipped(format!("classification failed: {e}")),
    }
    let sol = match mare_core::solve(p, opts) {
        Ok(sol) => sol,
        Err(first) if opts.method != mare_core::SolveMethod::Schur => {
            // Iterative kernels can overflow on hard draws; the direct
            // method still measures the margin for those seeds.
            let retry = SolverOptions {
                method: mare_core::SolveMethod::Schur,
                ..opts.clone()
            };
            match mare_core::solve(p, &retry) {
                Ok(sol) => sol,
                Err(_) => return TrialOutcome::Skipped(format!("solve failed: {first}")),
            }
        }
        Err(e) => return TrialOutcome::Skipped(format!("solve failed: {e}")),
    };
    match analysis::conjecture_probe(p, &sol) {
        Ok(probe) => TrialOutcome::Margin {
            rho: probe.rho,
            margin: probe.margin,
            case: probe.case,
        },
        Err(e) => TrialOutcome::Skipped(format!("probe not applicable: {e}")),
    }
}

fn print_histogram(margins: &[f64]) {
    if margins.is_empty() {
        return;
    }
    let lo = margins.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = margins.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        println!("margin histogram: all {} margins equal {lo:.6e}", margins.len());
        return;
    }
    let width = (hi - lo) / HISTOGRAM_BUCKETS as f64;
    let mut counts = [0usize; HISTOGRAM_BUCKETS];
    for &m in margins {
        let bucket = (((m - lo) / width) as usize).min(HISTOGRAM_BUCKETS - 1);
        counts[bucket] += 1;
    }
    let peak = counts.iter().max().copied().unwrap_or(1).max(1);
    println!("margin histogram:");
    for (i, &count) in counts.iter().enumerate() {
        let bucket_lo = lo + i as f64 * width;
        let bucket_hi = bucket_lo + width;
        let bar = "#".repeat((count * 40).div_ceil(peak).min(40));
        println!("  [{bucket_lo:+.4e}, {bucket_hi:+.4e}): {count:>6} {bar}");
    }
}

pub fn cmd_hunt(args: &HuntArgs) -> Result<ExitCode, CliError> {
    if args.trials == 0 {
        return Err(CliError::Usage("hunt needs at least one trial".into()));
    }
    if args.size == 0 {
        return Err(CliError::Usage("hunt needs a positive size".into()));
    }
    let opts = build_options(MethodArg::Doubling, &args.numerics)?;
    let mut stream = SplitMix64::new(args.seed);
    let mut margins = Vec::new();
    let mut skipped = 0usize;
    let mut generation_failures = 0usize;
    let mut counterexamples = 0usize;
    let mut min_margin: Option<(f64, u64)> = None;

    for trial in 0..args.trials {
        let sub_seed = stream.next_u64();
        let n = 1 + stream.below(args.size);
        let m = 1 + stream.below(args.size);
        let spec = GenSpec::for_category(GenCategory::ReducibleSingularRegular, n, m, sub_seed);
        let k = match random_generator_k(&spec) {
            Ok(k) => k,
            Err(GeneratorError::GenerationFailure { .. }) => {
                generation_failures += 1;
                println!("trial {trial}: seed={sub_seed} n={n} m={m} generation failed");
                continue;
            }
            Err(e) => return Err(CliError::Generation(e)),
        };
        let problem =
            RiccatiProblem::from_k(&k, n).expect("generated K always splits into a problem");
        match hunt_trial(&problem, &opts) {
            TrialOutcome::Margin { rho, margin, case } => {
                println!(
                    "trial {trial}: seed={sub_seed} n={n} m={m} case={case} rho={rho:.10} \
                     margin={margin:.6e}"
                );
                margins.push(margin);
                if min_margin.map_or(true, |(best, _)| margin < best) {
                    min_margin = Some((margin, sub_seed));
                }
                if margin <= 0.0 {
                    counterexamples += 1;
                    std::fs::create_dir_all(&args.out).map_err(|source| {
                        CliError::File(FileError::Io {
                            path: args.out.display().to_string(),
                            source,
                        })
                    })?;
                    let path = args.out.join(format!("counterexample-{sub_seed}.mare"));
                    let file = MatrixFile::from_problem(&problem);
                    let text = format!(
                        "# counterexample candidate: margin = {margin:.16e}, seed = {sub_seed}\n{}",
                        file.render()
                    );
                    std::fs::write(&path, text).map_err(|source| {
                        CliError::File(FileError::Io {
                            path: path.display().to_string(),
                            source,
                        })
                    })?;
                    println!("  counterexample candidate written to {}", path.display());
                }
            }
            TrialOutcome::Skipped(reason) => {
                skipped += 1;
                println!("trial {trial}: seed={sub_seed} n={n} m={m} skipped: {reason}");
            }
        }
    }

    println!(
        "hunt summary: trials={} solved={} skipped={skipped} generation_failures=\
         {generation_failures} counterexamples={counterexamples}",
        args.trials,
        margins.len()
    );
    if let Some((margin, seed)) = min_margin {
        println!("min margin = {margin:.6e} (seed {seed})");
    }
    print_histogram(&margins);
    Ok(ExitCode::SUCCESS)
}

pub fn cmd_gen(args: &GenArgs) -> Result<ExitCode, CliError> {
    let mut spec = GenSpec::for_category(args.category.into(), args.n, args.m, args.seed);
    spec.block_structure = args.blocks.clone();
    let k = random_generator_k(&spec)?;
    let kind = categorize(&k).map_err(|e| CliError::Solver(SolverError::Linalg(e)))?;
    let summary = format!(
        "generated {} x {} K (n = {}, m = {}, seed {}): {}",
        args.n + args.m,
        args.n + args.m,
        args.n,
        args.m,
        args.seed,
        describe_kind(&kind)
    );
    let file = MatrixFile::new(k, args.n);
    match &args.out {
        Some(path) => {
            file.write(path)?;
            println!("wrote {}", path.display());
            println!("{summary}");
        }
        None => {
            print!("{}", file.render());
            eprintln!("{summary}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use mare_core::{fixture, FixtureId};

    #[test]
    fn hunt_trial_skips_the_critical_case() {
        let p = fixture(FixtureId::Ex3).problem;
        match hunt_trial(&p, &SolverOptions::default()) {
            TrialOutcome::Skipped(reason) => assert!(reason.contains("III"), "{reason}"),
            TrialOutcome::Margin { .. } => panic!("critical trial must be skipped"),
        }
    }

    #[test]
    fn hunt_trial_measures_a_nonzero_gap_problem() {
        let p = fixture(FixtureId::Ex1).problem;
        match hunt_trial(&p, &SolverOptions::default()) {
            TrialOutcome::Margin { rho, margin, case } => {
                assert_eq!(case, CaseLabel::CaseII);
                assert!(rho < 1.0 && margin > 0.0);
                assert!((rho + margin - 1.0).abs() < 1e-12);
            }
            TrialOutcome::Skipped(reason) => panic!("unexpected skip: {reason}"),
        }
    }

    #[test]
    fn kind_descriptions_read_naturally() {
        let kind = categorize(&fixture(FixtureId::Ex1).problem.k()).unwrap();
        assert_eq!(
            describe_kind(&kind),
            "singular reducible M-matrix, regular, null rank 1"
        );
        let kind = categorize(&fixture(FixtureId::Km).problem.k()).unwrap();
        assert!(describe_kind(&kind).contains("not regular"));
        let kind = categorize(&fixture(FixtureId::Sc1).problem.k()).unwrap();
        assert_eq!(describe_kind(&kind), "nonsingular irreducible M-matrix");
    }

    #[test]
    fn exit_codes_follow_the_contract() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
        assert_eq!(CliError::Solver(SolverError::NotRegular).exit_code(), 2);
        assert_eq!(CliError::Solver(SolverError::NotMMatrix).exit_code(), 2);
        assert_eq!(
            CliError::Generation(GeneratorError::GenerationFailure { attempts: 100 }).exit_code(),
            3
        );
        assert_eq!(
            CliError::Generation(GeneratorError::InvalidSpec("n".into())).exit_code(),
            1
        );
    }

    #[test]
    fn tolerance_env_override() {
        assert_eq!(resolve_tol(Some(1e-8)).unwrap(), Some(1e-8));
        std::env::set_var("MARE_DEFAULT_TOL", "1e-9");
        assert_eq!(resolve_tol(None).unwrap(), Some(1e-9));
        assert_eq!(resolve_tol(Some(1e-8)).unwrap(), Some(1e-8));
        std::env::set_var("MARE_DEFAULT_TOL", "badnumber");
        assert!(resolve_tol(None).is_err());
        std::env::remove_var("MARE_DEFAULT_TOL");
        assert_eq!(resolve_tol(None).unwrap(), None);
    }
}
