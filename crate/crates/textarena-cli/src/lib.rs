//! Library backing the `textarena` binary: argument parsing, command
//! execution, and document rendering live here so integration tests can
//! drive them directly.
//!
//! Exit codes are part of the interface: 0 for success, 2 for an opted-in
//! performance-assertion failure, 64 for usage errors. Nothing else.

pub mod cli;
pub mod commands;
pub mod docs;
pub mod output;

pub use commands::{EXIT_OK, EXIT_PERF_ASSERTION, EXIT_USAGE, MIN_TIME_ENV};
pub use docs::{BenchDocument, DemoDocument, MemDocument, RatioReport, RunManifest};
pub use output::OutputFormat;

use clap::error::ErrorKind;
use clap::Parser;

use cli::{Cli, Command};

/// Parses `args` (including the program name) and runs the selected command.
/// Returns the process exit code; all output has been written by the time
/// this returns.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return EXIT_OK;
        }
        Err(e) => {
            eprint!("{e}");
            return EXIT_USAGE;
        }
    };

    let outcome = match &cli.command {
        Command::Bench(args) => commands::cmd_bench(args),
        Command::Mem(args) => commands::cmd_mem(args),
        Command::Demo(args) => commands::cmd_demo(&args.operation, args.format),
    };

    match outcome {
        Ok(code) => code,
        Err(usage) => {
            eprintln!("error: {usage}");
            EXIT_USAGE
        }
    }
}
