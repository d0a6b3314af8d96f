mod commands;
mod error;
mod stats;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use captl_core::pctl::SolveOptions;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "captl", version, about = "Context-aware protocol synthesis for MDPs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Synthesise a protocol and print its satisfaction probability.
    Synth(SynthArgs),
    /// Check a single query at the initial state.
    Verify(VerifyArgs),
    /// Write the per-objective state partition as CSV.
    Partition(PartitionArgs),
    /// Write the product chain (persistence) or the induced chain (pctl) as DOT.
    ExportDot(ExportDotArgs),
    /// Monte-Carlo estimate of the satisfaction probability of the synthesised protocol.
    Simulate(SimulateArgs),
    /// Model and product sizes plus phase timings as CSV.
    Stats(StatsArgs),
    /// Generate a case-study model and requirement.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgorithmArg {
    Pctl,
    Persistence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    Robot,
    Meda,
}

#[derive(Debug, Clone, Args)]
pub struct Numeric {
    #[arg(long, default_value_t = 1e-6)]
    epsilon: f64,
    #[arg(long = "max-iter", default_value_t = 1_000_000)]
    max_iter: usize,
}

impl Numeric {
    fn options(&self) -> Result<SolveOptions, CliError> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(CliError::Input(format!("--epsilon must lie in (0, 1), got {}", self.epsilon)));
        }
        if self.max_iter == 0 {
            return Err(CliError::Input("--max-iter must be positive".into()));
        }
        Ok(SolveOptions { epsilon: self.epsilon, max_iter: self.max_iter, ..SolveOptions::default() })
    }
}

#[derive(Debug, Clone, Args)]
pub struct Problem {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    req: PathBuf,
    #[arg(long, value_enum, default_value_t = AlgorithmArg::Persistence)]
    algorithm: AlgorithmArg,
    #[command(flatten)]
    numeric: Numeric,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[command(flatten)]
    problem: Problem,
    /// Protocol JSON output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the product (or induced chain) as DOT.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Also write the run statistics as CSV.
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    model: PathBuf,
    /// For example `Pmax<0.95 [ F "goal" ]`.
    #[arg(long)]
    query: String,
    #[command(flatten)]
    numeric: Numeric,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    req: PathBuf,
    #[command(flatten)]
    numeric: Numeric,
    /// CSV output; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExportDotArgs {
    #[command(flatten)]
    problem: Problem,
    /// DOT output; standard output when absent.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    problem: Problem,
    #[arg(long, default_value_t = 10_000)]
    runs: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Steps per run; ten per chain state when absent.
    #[arg(long)]
    horizon: Option<usize>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Model file; use --case and --size instead to generate instances.
    #[arg(long, requires = "req", conflicts_with = "case")]
    model: Option<PathBuf>,
    #[arg(long, requires = "model")]
    req: Option<PathBuf>,
    #[arg(long, value_enum, requires = "size")]
    case: Option<CaseArg>,
    /// Grid size `WxH`; repeat for several rows.
    #[arg(long)]
    size: Vec<String>,
    #[arg(long, value_enum, default_value_t = AlgorithmArg::Persistence)]
    algorithm: AlgorithmArg,
    #[command(flatten)]
    numeric: Numeric,
    /// CSV output; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    case: CaseArg,
    #[arg(long)]
    size: Option<String>,
    /// Directory receiving `<case>_<W>x<H>.json` and `.captl`.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Synth(a) => commands::synth(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Partition(a) => commands::partition(&a),
        Command::ExportDot(a) => commands::export_dot(&a),
        Command::Simulate(a) => commands::simulate(&a),
        Command::Stats(a) => commands::stats(&a),
        Command::Gen(a) => commands::gen(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
