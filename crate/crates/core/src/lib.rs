//! Solver library for algebraic Riccati equations with M-matrix structure.
//!
//! The equation under study is
//!
//! ```text
//! X C X - X D - A X + B = 0
//! ```
//!
//! with `A` (m x m), `B` (m x n), `C` (n x m), `D` (n x n) such that
//!
//! ```text
//! K = [ D  -C ]
//!     [ -B  A ]
//! ```
//!
//! is a nonsingular M-matrix or a singular M-matrix whose regularity makes
//! the minimal nonnegative solution well defined. The crate provides the
//! problem types, structural classification of `K`, several iterative and
//! direct solvers for the minimal solution, and analysis utilities for the
//! critical (singular) cases.

pub mod analysis;
pub mod generators;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod mmatrix;
pub mod riccati;
pub mod solvers;

pub use analysis::{
    AnalysisError, CaseLabel, EigenStructure, NullData, ProbeResult, PropertyCheck,
    PropertyReport, SecondSolutionReport,
};
pub use generators::{
    disc_epsilon, fixture, perturb_alpha, random_generator_k, random_problem, Fixture,
    FixtureExpectation, FixtureId, GenCategory, GenSpec, GeneratorError, SplitMix64,
};
pub use io::MatrixFile;
pub use matrix::{ComplexScalar, DenseMatrix};
pub use mmatrix::MatrixKind;
pub use riccati::{Reduction, RiccatiError, RiccatiProblem};
pub use solvers::{
    solve, ConvergenceLog, Solution, SolveMethod, SolverError, SolverOptions,
};
