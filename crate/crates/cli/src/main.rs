use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use centers_cli::bench::{run_table1, run_table2, table1_csv, table2_csv, Table1Config, DEFAULT_ALPHAS};
use centers_cli::compute::{run_compute, ComputeOptions, Family, Method};
use centers_cli::{CliError, CliResult};
use centers_core::categorical::DEFAULT_EPSILON;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "centers", version, about = "Jeffreys centroids and fast proxy centers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one center of a weighted set and print a JSON report.
    Compute(ComputeArgs),
    /// Run an experiment protocol and print CSV.
    #[command(subcommand)]
    Bench(BenchCommand),
}

#[derive(Args)]
struct ComputeArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long, value_enum)]
    method: Method,
    /// Histogram CSV (categorical) or Gaussian JSON list.
    #[arg(long)]
    input: PathBuf,
    /// Single CSV row of weights (uniform if absent).
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Also compare against the numerical Jeffreys centroid (categorical).
    #[arg(long)]
    reference: bool,
    /// Bisection width (jeffreys) or stopping threshold (gb).
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Random Dirichlet(1) histogram pairs per dimension.
    Table1(Table1Args),
    /// The pairs (1/3, 1/3, 1/3), (1 - α, α/2, α/2).
    Table2(Table2Args),
}

#[derive(Args)]
struct Table1Args {
    #[arg(long, value_delimiter = ',', default_values_t = [2usize, 4, 8, 16, 32, 64, 128, 256])]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    /// Zero the timing columns so reports diff byte-for-byte.
    #[arg(long)]
    no_timing: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Table2Args {
    #[arg(long, value_delimiter = ',')]
    alphas: Option<Vec<f64>>,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long)]
    no_timing: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn emit(text: &str, output: Option<&Path>) -> CliResult<()> {
    match output {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io { path: p.to_path_buf(), source }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source }),
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Compute(a) => {
            let opts = ComputeOptions {
                family: a.family,
                method: a.method,
                input: a.input,
                weights: a.weights,
                reference: a.reference,
                epsilon: a.epsilon,
            };
            let report = run_compute(&opts)?;
            let mut text = serde_json::to_string_pretty(&report).expect("serializable report");
            text.push('\n');
            emit(&text, a.output.as_deref())
        }
        Command::Bench(BenchCommand::Table1(a)) => {
            let cfg =
                Table1Config { seed: a.seed, trials: a.trials, dims: a.dims, epsilon: a.epsilon, timing: !a.no_timing };
            emit(&table1_csv(&run_table1(&cfg)?), a.output.as_deref())
        }
        Command::Bench(BenchCommand::Table2(a)) => {
            let alphas = a.alphas.unwrap_or_else(|| DEFAULT_ALPHAS.to_vec());
            emit(&table2_csv(&run_table2(&alphas, a.epsilon, !a.no_timing)?), a.output.as_deref())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("CENTERS_LOG", "warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
