//! Command-line interface definition.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mare_core::{GenCategory, SolveMethod};

#[derive(Parser)]
#[command(
    name = "mare",
    version,
    about = "Toolkit for algebraic Riccati equations with M-matrix structure",
    long_about = "Solves X C X - X D - A X + B = 0 for the minimal nonnegative solution, \
                  where K = [D -C; -B A] is a nonsingular or singular regular M-matrix. \
                  Problems travel as plain-text matrix files (see the gen subcommand)."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Solve a problem file for the minimal nonnegative solution
    Solve(SolveArgs),
    /// Report problem structure: categorization, case, eigenvalues, null data
    Analyze(AnalyzeArgs),
    /// Run several methods on one problem and compare the solutions
    Compare(CompareArgs),
    /// Search random singular problems for coupling-matrix counterexamples
    Hunt(HuntArgs),
    /// Generate a random problem file of a requested category
    Gen(GenArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum MethodArg {
    #[value(name = "fixed_point", alias = "fixed-point")]
    FixedPoint,
    #[value(name = "newton")]
    Newton,
    #[value(name = "doubling")]
    Doubling,
    #[value(name = "schur")]
    Schur,
}

impl From<MethodArg> for SolveMethod {
    fn from(value: MethodArg) -> Self {
        match value {
            MethodArg::FixedPoint => SolveMethod::FixedPoint,
            MethodArg::Newton => SolveMethod::Newton,
            MethodArg::Doubling => SolveMethod::Doubling,
            MethodArg::Schur => SolveMethod::Schur,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CategoryArg {
    #[value(name = "nonsingular")]
    Nonsingular,
    #[value(name = "irreducible_singular", alias = "irreducible-singular")]
    IrreducibleSingular,
    #[value(
        name = "reducible_singular_regular",
        alias = "reducible-singular-regular"
    )]
    ReducibleSingularRegular,
}

impl From<CategoryArg> for GenCategory {
    fn from(value: CategoryArg) -> Self {
        match value {
            CategoryArg::Nonsingular => GenCategory::Nonsingular,
            CategoryArg::IrreducibleSingular => GenCategory::IrreducibleSingular,
            CategoryArg::ReducibleSingularRegular => GenCategory::ReducibleSingularRegular,
        }
    }
}

/// Numeric knobs shared by the solving commands; unset values fall back
/// to the solver defaults (and MARE_DEFAULT_TOL for the tolerance).
#[derive(Args, Debug)]
pub struct NumericArgs {
    /// Convergence tolerance (default 1e-12, or MARE_DEFAULT_TOL if set)
    #[arg(long)]
    pub tol: Option<f64>,
    /// Iteration cap for the iterative methods
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Doubling shift for the A side (default: largest diagonal of A)
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Doubling shift for the D side (default: largest diagonal of D)
    #[arg(long)]
    pub beta: Option<f64>,
    /// Single-shift doubling parameter; excludes --alpha and --beta
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Extra shift applied when a doubling step is near singular
    #[arg(long)]
    pub shift_delta: Option<f64>,
}

#[derive(Args)]
pub struct SolveArgs {
    /// Problem file in mare format
    pub input: PathBuf,
    /// Solution method
    #[arg(long, value_enum, default_value = "doubling")]
    pub method: MethodArg,
    #[command(flatten)]
    pub numerics: NumericArgs,
    /// Emit the flat machine-readable report instead of prose
    #[arg(long)]
    pub machine: bool,
}

#[derive(Args)]
pub struct AnalyzeArgs {
    /// Problem file in mare format
    pub input: PathBuf,
    /// Also solve the problem and verify the solution properties
    #[arg(long)]
    pub verify: bool,
    /// Method used by --verify
    #[arg(long, value_enum, default_value = "doubling")]
    pub method: MethodArg,
    #[command(flatten)]
    pub numerics: NumericArgs,
    /// Emit the flat machine-readable report instead of prose
    #[arg(long)]
    pub machine: bool,
}

#[derive(Args)]
pub struct CompareArgs {
    /// Problem file in mare format
    pub input: PathBuf,
    /// Methods to run, comma separated; at least two distinct
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_values = ["fixed_point", "newton", "doubling", "schur"]
    )]
    pub methods: Vec<MethodArg>,
    #[command(flatten)]
    pub numerics: NumericArgs,
    /// Emit the flat machine-readable report instead of prose
    #[arg(long)]
    pub machine: bool,
}

#[derive(Args)]
pub struct HuntArgs {
    /// Number of random trials
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Base seed of the trial stream
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest block dimension drawn for n and m
    #[arg(long, default_value_t = 4)]
    pub size: usize,
    /// Directory receiving serialized counterexamples, created on demand
    #[arg(long, default_value = "hunt-out")]
    pub out: PathBuf,
    #[command(flatten)]
    pub numerics: NumericArgs,
}

#[derive(Args)]
pub struct GenArgs {
    /// Structural category of the generated K
    #[arg(long, value_enum)]
    pub category: CategoryArg,
    /// Leading block dimension n
    #[arg(long)]
    pub n: usize,
    /// Trailing block dimension m
    #[arg(long)]
    pub m: usize,
    /// Generator seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Diagonal block sizes of the imposed reducible pattern, comma separated
    #[arg(long, value_delimiter = ',')]
    pub blocks: Option<Vec<usize>>,
    /// Output path; when omitted the file prints to standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
}
