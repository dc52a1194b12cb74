//! Reference fixtures and seeded random problem generators.
//!
//! The fixtures are the small exact-entry problems used throughout the
//! test suite, each carrying its documented expected data. The random
//! generators draw Markov-generator style M-matrices of a requested
//! category (nonsingular, irreducible singular, or reducible singular
//! regular) from a deterministic stream, so property tests and long
//! conjecture hunts are reproducible from a seed alone.

use thiserror::Error;

use crate::analysis::CaseLabel;
use crate::matrix::DenseMatrix;
use crate::mmatrix::categorize;
use crate::riccati::RiccatiProblem;

/// Redraw attempts before generation fails loudly.
const REDRAW_CAP: usize = 100;
/// Range of off-diagonal magnitudes; bounded away from zero so the
/// connectivity of a draw is not left to rounding.
const OFFDIAG_RANGE: (f64, f64) = (0.05, 1.0);
/// Range of the diagonal slack that makes a draw nonsingular.
const SLACK_RANGE: (f64, f64) = (0.1, 1.0);

/// SplitMix64 pseudo-random stream.
///
/// The exact algorithm is part of the external contract so other
/// implementations can reproduce generated problems from the seed: the
/// state advances by `0x9E3779B97F4A7C15` and the output mixes with
/// xor-shifts and the multipliers `0xBF58476D1CE4E5B9` and
/// `0x94D049BB133111EB`. Doubles take the top 53 bits into `[0, 1)`.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform double in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform double in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform index in `0..bound` (plain modulo; the tiny bias does not
    /// matter for test-data generation).
    pub fn below(&mut self, bound: usize) -> usize {
        assert!(bound > 0, "bound must be positive");
        (self.next_u64() % bound as u64) as usize
    }
}

/// Requested structural category of a generated `K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenCategory {
    /// Strictly diagonally dominant draw; `K` nonsingular.
    Nonsingular,
    /// Zero row sums with full connectivity; `K e = 0`, irreducible.
    IrreducibleSingular,
    /// Zero row sums with a block upper-triangular sparsity pattern;
    /// singular, reducible, regular, with a one-dimensional null space.
    ReducibleSingularRegular,
}

impl GenCategory {
    fn needs_zero_row_sums(self) -> bool {
        !matches!(self, GenCategory::Nonsingular)
    }
}

/// Recipe for one random problem.
#[derive(Debug, Clone)]
pub struct GenSpec {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub category: GenCategory,
    /// Diagonal set to the row sums of the off-diagonals, giving `Ke = 0`.
    /// Must match the category: false for nonsingular, true otherwise.
    pub zero_row_sums: bool,
    /// Sizes of the diagonal blocks of the imposed upper-triangular block
    /// pattern; `None` lets the reducible category pick a random split.
    pub block_structure: Option<Vec<usize>>,
}

impl GenSpec {
    /// Spec with the flags the category requires.
    pub fn for_category(category: GenCategory, n: usize, m: usize, seed: u64) -> Self {
        Self {
            n,
            m,
            seed,
            category,
            zero_row_sums: category.needs_zero_row_sums(),
            block_structure: None,
        }
    }

    fn validate(&self) -> Result<(), GeneratorError> {
        if self.n == 0 || self.m == 0 {
            return Err(GeneratorError::InvalidSpec(
                "both block dimensions must be at least 1".into(),
            ));
        }
        if self.zero_row_sums != self.category.needs_zero_row_sums() {
            return Err(GeneratorError::InvalidSpec(format!(
                "zero_row_sums = {} contradicts category {:?}",
                self.zero_row_sums, self.category
            )));
        }
        if let Some(blocks) = &self.block_structure {
            if blocks.iter().sum::<usize>() != self.n + self.m || blocks.iter().any(|&b| b == 0) {
                return Err(GeneratorError::InvalidSpec(
                    "block sizes must be positive and sum to n + m".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Errors from the random generators.
#[derive(Debug, Error)]
pub enum GeneratorError {
    #[error("no draw matched the requested category after {attempts} attempts")]
    GenerationFailure { attempts: usize },
    #[error("invalid generation spec: {0}")]
    InvalidSpec(String),
}

fn block_of(index: usize, blocks: &[usize]) -> usize {
    let mut start = 0;
    for (which, &size) in blocks.iter().enumerate() {
        if index < start + size {
            return which;
        }
        start += size;
    }
    unreachable!("index beyond the block partition");
}

fn draw_k(spec: &GenSpec, rng: &mut SplitMix64) -> DenseMatrix {
    let t = spec.n + spec.m;
    let blocks: Option<Vec<usize>> = match (&spec.block_structure, spec.category) {
        (Some(b), _) => Some(b.clone()),
        (None, GenCategory::ReducibleSingularRegular) => {
            let split = 1 + rng.below(t - 1);
            Some(vec![split, t - split])
        }
        (None, _) => None,
    };
    let mut q = DenseMatrix::zeros(t, t);
    for i in 0..t {
        for j in 0..t {
            if i == j {
                continue;
            }
            let keep = match &blocks {
                Some(b) => block_of(i, b) <= block_of(j, b),
                None => true,
            };
            if keep {
                q[(i, j)] = rng.uniform(OFFDIAG_RANGE.0, OFFDIAG_RANGE.1);
            }
        }
    }
    let mut k = DenseMatrix::zeros(t, t);
    for i in 0..t {
        let mut row_sum = 0.0;
        for j in 0..t {
            if i != j && q[(i, j)] > 0.0 {
                k[(i, j)] = -q[(i, j)];
                row_sum += q[(i, j)];
            }
        }
        k[(i, i)] = if spec.zero_row_sums {
            row_sum
        } else {
            row_sum + rng.uniform(SLACK_RANGE.0, SLACK_RANGE.1)
        };
    }
    k
}

fn confirms(k: &DenseMatrix, spec: &GenSpec) -> bool {
    let kind = match categorize(k) {
        Ok(kind) => kind,
        Err(_) => return false,
    };
    match spec.category {
        GenCategory::Nonsingular => kind.is_m && !kind.singular,
        GenCategory::IrreducibleSingular => {
            kind.is_m && kind.singular && kind.irreducible && kind.regular && kind.null_rank == 1
        }
        GenCategory::ReducibleSingularRegular => {
            kind.is_m && kind.singular && !kind.irreducible && kind.regular && kind.null_rank == 1
        }
    }
}

/// Draws a `K` of the requested category, redrawing until the structural
/// classifier confirms it.
pub fn random_generator_k(spec: &GenSpec) -> Result<DenseMatrix, GeneratorError> {
    spec.validate()?;
    let mut rng = SplitMix64::new(spec.seed);
    for _ in 0..REDRAW_CAP {
        let k = draw_k(spec, &mut rng);
        if confirms(&k, spec) {
            return Ok(k);
        }
    }
    Err(GeneratorError::GenerationFailure {
        attempts: REDRAW_CAP,
    })
}

/// Draws a problem by splitting a generated `K` at `spec.n`.
pub fn random_problem(spec: &GenSpec) -> Result<RiccatiProblem, GeneratorError> {
    let k = random_generator_k(spec)?;
    Ok(RiccatiProblem::from_k(&k, spec.n).expect("a generated K is a valid Z-pattern"))
}

/// Scales the `B` and `A` blocks by `alpha >= 1`, the row perturbation
/// that pushes a critical problem into the positive-gap case.
pub fn perturb_alpha(p: &RiccatiProblem, alpha: f64) -> RiccatiProblem {
    assert!(alpha >= 1.0, "alpha must be at least 1");
    RiccatiProblem::new(
        p.a().scale(alpha),
        p.b().scale(alpha),
        p.c().clone(),
        p.d().clone(),
    )
    .expect("scaling rows of a valid problem keeps it valid")
}

/// The named reference problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureId {
    /// 2x2 blocks; substochastic minimal solution, negative gap.
    Ex1,
    /// 2x2 blocks; stochastic minimal solution, positive gap, and a
    /// second positive solution.
    Ex2,
    /// 2x2 blocks; critical problem with a defective double zero.
    Ex3,
    /// Singular K that admits no positive `v` with `Kv >= 0`; solvers
    /// must refuse it.
    Km,
    /// Scalar problem with a quadratic-formula solution.
    Sc1,
    /// Zero 2x2 `K`, the base point of a solution discontinuity.
    Disc1,
    /// 4x4 rank-one `K`, the base point of a matrix-valued discontinuity.
    Disc2,
}

impl FixtureId {
    pub const ALL: [FixtureId; 7] = [
        FixtureId::Ex1,
        FixtureId::Ex2,
        FixtureId::Ex3,
        FixtureId::Km,
        FixtureId::Sc1,
        FixtureId::Disc1,
        FixtureId::Disc2,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FixtureId::Ex1 => "ex1",
            FixtureId::Ex2 => "ex2",
            FixtureId::Ex3 => "ex3",
            FixtureId::Km => "km",
            FixtureId::Sc1 => "sc1",
            FixtureId::Disc1 => "disc1",
            FixtureId::Disc2 => "disc2",
        }
    }

    pub fn parse(text: &str) -> Option<FixtureId> {
        FixtureId::ALL.into_iter().find(|id| id.name() == text)
    }

    pub fn description(&self) -> &'static str {
        match self {
            FixtureId::Ex1 => "2x2 blocks with a substochastic minimal solution and negative gap",
            FixtureId::Ex2 => {
                "2x2 blocks with a stochastic minimal solution, positive gap, and a second \
                 positive solution"
            }
            FixtureId::Ex3 => "critical 2x2 problem with a defective double zero eigenvalue",
            FixtureId::Km => "singular K admitting no positive v with Kv >= 0; solvers refuse it",
            FixtureId::Sc1 => "scalar problem solved by the quadratic formula",
            FixtureId::Disc1 => "zero 2x2 K at the base point of a solution discontinuity",
            FixtureId::Disc2 => "rank-one 4x4 K at the base point of a matrix discontinuity",
        }
    }
}

/// Documented outcome data; fields are `None` where the fixture does not
/// pin them.
#[derive(Debug, Clone)]
pub struct FixtureExpectation {
    /// Minimal nonnegative solution.
    pub phi: Option<DenseMatrix>,
    /// Eigenvalues of `H`, descending (all reference spectra are real).
    pub h_eigenvalues: Option<Vec<f64>>,
    pub case: Option<CaseLabel>,
    /// Whether the minimal-solution theory applies; `false` means solvers
    /// must reject the problem.
    pub regular: bool,
}

/// A reference problem with its expected data.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub id: FixtureId,
    pub problem: RiccatiProblem,
    pub expected: FixtureExpectation,
}

/// Builds the requested reference problem.
pub fn fixture(id: FixtureId) -> Fixture {
    let (problem, expected) = match id {
        FixtureId::Ex1 => (
            RiccatiProblem::new(
                DenseMatrix::from_rows(&[&[2.0, -1.0], &[-1.0, 2.0]]),
                DenseMatrix::from_rows(&[&[0.0, 1.0], &[0.0, 1.0]]),
                DenseMatrix::from_rows(&[&[1.0, 0.0], &[1.0, 1.0]]),
                DenseMatrix::from_rows(&[&[2.0, -1.0], &[0.0, 2.0]]),
            )
            .unwrap(),
            FixtureExpectation {
                phi: Some(DenseMatrix::from_rows(&[&[0.0, 0.5], &[0.0, 0.5]])),
                h_eigenvalues: Some(vec![2.0, 1.0, 0.0, -3.0]),
                case: Some(CaseLabel::CaseII),
                regular: true,
            },
        ),
        FixtureId::Ex2 => (
            RiccatiProblem::new(
                DenseMatrix::from_rows(&[&[2.0, -2.0], &[0.0, 2.0]]),
                DenseMatrix::from_rows(&[&[0.0, 0.0], &[1.0, 1.0]]),
                DenseMatrix::from_rows(&[&[0.0, 1.0], &[0.0, 1.0]]),
                DenseMatrix::from_rows(&[&[2.0, -1.0], &[-1.0, 2.0]]),
            )
            .unwrap(),
            FixtureExpectation {
                phi: Some(DenseMatrix::from_rows(&[&[0.5, 0.5], &[0.5, 0.5]])),
                h_eigenvalues: Some(vec![3.0, 0.0, -1.0, -2.0]),
                case: Some(CaseLabel::CaseI),
                regular: true,
            },
        ),
        FixtureId::Ex3 => (
            RiccatiProblem::new(
                DenseMatrix::from_rows(&[&[1.0, -1.0], &[0.0, 1.0]]),
                DenseMatrix::from_rows(&[&[0.0, 0.0], &[0.0, 1.0]]),
                DenseMatrix::from_rows(&[&[0.0, 1.0], &[0.0, 1.0]]),
                DenseMatrix::identity(2),
            )
            .unwrap(),
            FixtureExpectation {
                phi: Some(DenseMatrix::from_rows(&[&[0.0, 1.0], &[0.0, 1.0]])),
                h_eigenvalues: Some(vec![1.0, 0.0, 0.0, -1.0]),
                case: Some(CaseLabel::CaseIII),
                regular: true,
            },
        ),
        FixtureId::Km => (
            RiccatiProblem::new(
                DenseMatrix::zeros(1, 1),
                DenseMatrix::from_rows(&[&[1.0]]),
                DenseMatrix::zeros(1, 1),
                DenseMatrix::zeros(1, 1),
            )
            .unwrap(),
            FixtureExpectation {
                phi: None,
                h_eigenvalues: None,
                case: None,
                regular: false,
            },
        ),
        FixtureId::Sc1 => (
            RiccatiProblem::new(
                DenseMatrix::from_rows(&[&[2.0]]),
                DenseMatrix::from_rows(&[&[1.0]]),
                DenseMatrix::from_rows(&[&[1.0]]),
                DenseMatrix::from_rows(&[&[3.0]]),
            )
            .unwrap(),
            FixtureExpectation {
                phi: Some(DenseMatrix::from_rows(&[&[(5.0 - 21.0_f64.sqrt()) / 2.0]])),
                h_eigenvalues: Some(vec![
                    (1.0 + 21.0_f64.sqrt()) / 2.0,
                    (1.0 - 21.0_f64.sqrt()) / 2.0,
                ]),
                case: Some(CaseLabel::NonsingularK),
                regular: true,
            },
        ),
        FixtureId::Disc1 => (
            RiccatiProblem::new(
                DenseMatrix::zeros(1, 1),
                DenseMatrix::zeros(1, 1),
                DenseMatrix::zeros(1, 1),
                DenseMatrix::zeros(1, 1),
            )
            .unwrap(),
            FixtureExpectation {
                phi: Some(DenseMatrix::zeros(1, 1)),
                h_eigenvalues: Some(vec![0.0, 0.0]),
                case: Some(CaseLabel::DegenerateNullSpace),
                regular: true,
            },
        ),
        FixtureId::Disc2 => {
            let block = DenseMatrix::from_rows(&[&[1.0, 0.0], &[0.0, 0.0]]);
            (
                RiccatiProblem::new(block.clone(), block.clone(), block.clone(), block).unwrap(),
                FixtureExpectation {
                    phi: Some(DenseMatrix::from_rows(&[&[1.0, 0.0], &[0.0, 0.0]])),
                    h_eigenvalues: Some(vec![0.0, 0.0, 0.0, 0.0]),
                    case: Some(CaseLabel::DegenerateNullSpace),
                    regular: true,
                },
            )
        }
    };
    Fixture {
        id,
        problem,
        expected,
    }
}

/// The perturbed member of a discontinuity family, with the expected
/// minimal solution it jumps to for any positive `eps`.
///
/// Only [`FixtureId::Disc1`] and [`FixtureId::Disc2`] have a family.
pub fn disc_epsilon(id: FixtureId, eps: f64) -> (RiccatiProblem, DenseMatrix) {
    assert!(eps > 0.0, "the perturbation must be positive");
    match id {
        FixtureId::Disc1 => {
            let e = DenseMatrix::from_rows(&[&[eps]]);
            (
                RiccatiProblem::new(e.clone(), e.clone(), e.clone(), e).unwrap(),
                DenseMatrix::from_rows(&[&[1.0]]),
            )
        }
        FixtureId::Disc2 => {
            let block = DenseMatrix::from_rows(&[&[1.0, 0.0], &[0.0, eps]]);
            (
                RiccatiProblem::new(block.clone(), block.clone(), block.clone(), block).unwrap(),
                DenseMatrix::identity(2),
            )
        }
        other => panic!("fixture {other:?} has no epsilon family"),
    }
}
