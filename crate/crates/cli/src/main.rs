//! `obstack`: generate, color, evaluate and verify oblivious stacking
//! experiments.
//!
//! Exit codes: 0 success, 1 usage or invalid input, 2 verification failure,
//! 3 I/O error.

mod commands;
mod instance;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use oblivious_stacking::analysis::PairMode;
use oblivious_stacking::standard_max_len;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Verification(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Verification(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<oblivious_stacking::Error> for CliError {
    fn from(e: oblivious_stacking::Error) -> Self {
        use oblivious_stacking::Error as E;
        match e {
            E::Io(_) | E::Json(_) | E::Csv(_) => CliError::Io(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Maximum interval length: `paper` for `(k - 1) / (5k)`, a decimal, or a
/// fraction `a/b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LenRule {
    Paper,
    Value(f64),
}

impl LenRule {
    pub fn resolve(self, k: u32) -> Result<f64, CliError> {
        let len = match self {
            LenRule::Paper => {
                if k < 2 {
                    return Err(CliError::Usage(format!("k must be at least 2, got {k}")));
                }
                standard_max_len::<f64>(k)
            }
            LenRule::Value(v) => v,
        };
        if !(len > 0.0 && len <= 1.0) {
            return Err(CliError::Usage(format!("L must lie in (0, 1], got {len}")));
        }
        Ok(len)
    }
}

impl FromStr for LenRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s == "paper" {
            return Ok(LenRule::Paper);
        }
        let parse = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("cannot parse L from {s:?}"));
        match s.split_once('/') {
            Some((a, b)) => {
                let (a, b) = (parse(a)?, parse(b)?);
                if b == 0.0 {
                    return Err(format!("zero denominator in {s:?}"));
                }
                Ok(LenRule::Value(a / b))
            }
            None => parse(s).map(LenRule::Value),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Oblivious,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    /// Pr(SC | OV) against its closed form.
    Lemma2,
    /// Overlap probability at fixed center distances.
    Lemma1,
    /// Unconditional overlap probability.
    Pov,
    /// Print the closed forms only.
    Theory,
}

fn parse_mode(s: &str) -> Result<PairMode, String> {
    s.parse::<PairMode>().map_err(|e| e.to_string())
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Debug, Parser)]
#[command(name = "obstack", version, about = "Oblivious stacking experiments on random interval instances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Draw a random instance and write it as `center,length` CSV.
    Generate(GenerateArgs),
    /// Color an instance with the oblivious rule or uniformly at random.
    Color(ColorArgs),
    /// Report overlap edges, cut size and conflicts of a colored instance.
    Evaluate(EvaluateArgs),
    /// Compare Monte Carlo estimates with the closed forms.
    Verify(VerifyArgs),
    /// Run the exact and greedy MAX k-CUT solvers next to the oblivious rule.
    Maxcut(MaxcutArgs),
    /// Export the overlap graph of an instance as an edge list.
    Graph(GraphArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 5)]
    pub k: u32,
    #[arg(long = "L", default_value = "paper")]
    pub max_len: LenRule,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// JSON file with `bin_edges` and `bin_heights` for the length density.
    #[arg(long)]
    pub density: Option<PathBuf>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ColorArgs {
    /// Instance CSV, `-` for stdin.
    pub input: PathBuf,
    #[arg(long, default_value_t = 5)]
    pub k: u32,
    #[arg(long = "L", default_value = "paper")]
    pub max_len: LenRule,
    #[arg(long, value_enum, default_value_t = StrategyArg::Oblivious)]
    pub strategy: StrategyArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Colored instance CSV, `-` for stdin.
    pub input: PathBuf,
    /// Number of colors; defaults to the largest color present.
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Target::Lemma2)]
    pub target: Target,
    #[arg(long, value_delimiter = ',', default_values_t = [5u32, 10, 20, 30])]
    pub k: Vec<u32>,
    #[arg(long = "L", default_value = "paper")]
    pub max_len: LenRule,
    /// Intervals per instance in all-pairs mode.
    #[arg(long, default_value_t = 200_000)]
    pub n: usize,
    /// `all-pairs` or `independent-pairs`.
    #[arg(long, default_value = "all-pairs", value_parser = parse_mode)]
    pub mode: PairMode,
    /// Pairs per estimate in independent-pairs mode and for lemma1.
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,
    #[arg(long, default_value_t = default_workers())]
    pub workers: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest accepted |relative difference| for lemma2 and pov.
    #[arg(long, default_value_t = 0.01)]
    pub threshold: f64,
    /// Center distances in units of L for lemma1.
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 1.0 / 3.0, 0.5, 0.8])]
    pub x: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MaxcutArgs {
    /// Instance CSV, `-` for stdin.
    pub input: PathBuf,
    #[arg(long, default_value_t = 5)]
    pub k: u32,
    #[arg(long = "L", default_value = "paper")]
    pub max_len: LenRule,
    /// Only the exact solver (refused above 16 intervals).
    #[arg(long, conflicts_with = "greedy")]
    pub exact: bool,
    /// Only the greedy solver.
    #[arg(long)]
    pub greedy: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Instance CSV, `-` for stdin.
    pub input: PathBuf,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate(args) => commands::generate(&args),
        Command::Color(args) => commands::color(&args),
        Command::Evaluate(args) => commands::evaluate(&args),
        Command::Verify(args) => commands::verify(&args),
        Command::Maxcut(args) => commands::maxcut(&args),
        Command::Graph(args) => commands::graph(&args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
