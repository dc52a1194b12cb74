//! Temporary probe for acceptance-test design.

use mare_core::analysis::{self, CaseLabel};
use mare_core::solvers::{solve, SolverOptions};
use mare_core::{random_problem, GenCategory, GenSpec, SplitMix64};

fn main() {
    let mut rng = SplitMix64::new(99);
    let mut failures = 0;
    for trial in 0..1000u32 {
        let seed = rng.next_u64();
        let n = 1 + rng.below(4);
        let m = 1 + rng.below(4);
        let spec = GenSpec::for_category(GenCategory::ReducibleSingularRegular, n, m, seed);
        let p = match random_problem(&spec) {
            Ok(p) => p,
            Err(_) => continue,
        };
        match analysis::classify_case(&p) {
            Ok(CaseLabel::CaseI | CaseLabel::CaseII) => {}
            _ => continue,
        }
        if let Err(e) = solve(&p, &SolverOptions::default()) {
            failures += 1;
            let red = p.reduce_zero_diagonal().map(|r| r.r).unwrap_or(99);
            println!("trial {trial} seed {seed} n={n} m={m} reduced_rows={red}: {e}");
            if failures >= 12 {
                break;
            }
        }
    }
}
