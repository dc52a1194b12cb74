//! `mare`: command-line front end for the Riccati solver library.
//!
//! Exit codes: 0 success, 1 usage or input errors, 2 structural rejection
//! of the problem (K not an M-matrix, or singular without a regularity
//! certificate), 3 numerical failure (non-convergence or generation
//! failure).

mod args;
mod commands;
mod report;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Dying quietly on a closed pipe is the expected behavior for a
/// line-oriented tool; Rust ignores SIGPIPE by default.
fn reset_sigpipe() {
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

fn main() -> ExitCode {
    reset_sigpipe();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let benign = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if benign {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => commands::cmd_solve(a),
        Command::Analyze(a) => commands::cmd_analyze(a),
        Command::Compare(a) => commands::cmd_compare(a),
        Command::Hunt(a) => commands::cmd_hunt(a),
        Command::Gen(a) => commands::cmd_gen(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
