//! Command-line surface.

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::OutputFormat;

#[derive(Debug, Parser)]
#[command(
    name = "textarena",
    about = "Benchmark suites, memory reports, and demos for boxed vs. contiguous text containers",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run registered benchmark workloads and print results with speedup rows.
    Bench(BenchArgs),
    /// Build both containers and print their byte breakdowns and metadata ratio.
    Mem(MemArgs),
    /// Run one named operation and print its result.
    Demo(DemoArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteName {
    Build,
    Concat,
    All,
}

impl SuiteName {
    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Build => "build",
            SuiteName::Concat => "concat",
            SuiteName::All => "all",
        }
    }
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Workload group to run.
    #[arg(long, value_enum, default_value_t = SuiteName::All)]
    pub suite: SuiteName,
    #[arg(long, value_enum, default_value_t = OutputFormat::Md)]
    pub format: OutputFormat,
    /// Minimum milliseconds per repetition (default 500; the
    /// TEXTARENA_MIN_TIME_MS environment variable overrides the default).
    #[arg(long)]
    pub min_time_ms: Option<u64>,
    /// Repetitions per workload (default 5).
    #[arg(long)]
    pub reps: Option<usize>,
    /// Fail (exit 2) when the container build ordering does not hold:
    /// uniformBuild mean must be at most half the boxedBuild mean,
    /// each taken as the median of 3 harness runs.
    #[arg(long)]
    pub assert: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Fixed-cost accounting model (104-byte element headers).
    Paper,
    /// Actual bytes held by this implementation.
    Native,
}

#[derive(Debug, Args)]
pub struct MemArgs {
    /// Element count.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "TestResult")]
    pub prefix: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Paper)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = OutputFormat::Md)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[command(subcommand)]
    pub operation: DemoOp,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Md)]
    pub format: OutputFormat,
}

#[derive(Debug, Subcommand)]
pub enum DemoOp {
    /// Per element, the text before the first occurrence of the delimiter.
    Extract {
        #[arg(long)]
        delim: String,
        #[arg(required = true)]
        values: Vec<String>,
    },
    /// Broadcast `prefix + numbers` into a uniform string array.
    Plus {
        prefix: String,
        #[arg(required = true, allow_negative_numbers = true)]
        numbers: Vec<f64>,
    },
    /// Pad texts into a char matrix and print its column-major readout.
    Matrix {
        #[arg(required = true)]
        texts: Vec<String>,
    },
}
