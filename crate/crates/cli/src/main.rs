mod commands;
mod point;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

/// Elliptic Poincaré series, their expansions and identity checks.
#[derive(Parser, Debug)]
#[command(name = "polar-maass", version)]
pub struct Cli {
    /// Working precision in bits; 53 selects the double-precision fast path.
    #[arg(long, global = true, env = "POLAR_MAASS_PRECISION", default_value_t = 128)]
    pub precision: u32,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a truncated series at one point.
    Eval(EvalArgs),
    /// Extract elliptic expansion coefficients of a series around a point.
    Coeffs(CoeffsArgs),
    /// Run a verification suite.
    #[command(subcommand)]
    Check(CheckCommand),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Psi,
    P,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct Truncation {
    /// Bound on |c| and |d| of the bottom row.
    #[arg(long = "Ncd", visible_alias = "n-cd", default_value_t = 120)]
    pub n_cd: i64,
    /// Bound on the translation index; defaults to the value of --Ncd.
    #[arg(long = "Nt", visible_alias = "n-t")]
    pub n_t: Option<i64>,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Write reports to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long)]
    pub k: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub n: i64,
    /// Base point, as x+yi.
    #[arg(long, allow_hyphen_values = true)]
    pub base: String,
    /// Evaluation point, as x+yi.
    #[arg(long, allow_hyphen_values = true)]
    pub z: String,
    #[command(flatten)]
    pub trunc: Truncation,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expansion {
    Meromorphic,
    Harmonic,
    HarmonicCusp,
}

#[derive(Args, Debug)]
pub struct CoeffsArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long)]
    pub k: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub n: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub base: String,
    /// Expansion point, as x+yi.
    #[arg(long, allow_hyphen_values = true)]
    pub center: String,
    #[arg(long, allow_hyphen_values = true, default_value_t = -4)]
    pub n_min: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 4)]
    pub n_max: i64,
    /// Shape of the expansion; defaults to meromorphic for psi and
    /// harmonic-cusp for p.
    #[arg(long, value_enum)]
    pub expansion: Option<Expansion>,
    #[arg(long, default_value_t = 0.2)]
    pub radius: f64,
    #[arg(long, default_value_t = 0.35)]
    pub radius2: f64,
    #[arg(long = "Mquad", visible_alias = "m-quad", default_value_t = 64)]
    pub m_quad: usize,
    #[command(flatten)]
    pub trunc: Truncation,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum CheckCommand {
    /// Randomized pointwise identities.
    Identities(IdentityArgs),
    /// Images of the harmonic series under ξ and D.
    Operators(OperatorArgs),
    /// Vanishing of the harmonic series at base i for even indices.
    Parity(ParityArgs),
    /// Coefficient duality between the two series.
    Duality(DualityArgs),
    /// Values or errors as the truncation grows.
    Convergence(ConvergenceArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// Special functions, constants, distances and Fay's functions.
    Identity,
    Special,
    Constants,
    Geometry,
    Fay,
    Recurrences,
    Terms,
    Bol,
    Laplacian,
}

#[derive(Args, Debug)]
pub struct IdentityArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[arg(long, value_enum, default_value_t = Suite::Identity)]
    pub suite: Suite,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Args, Debug)]
pub struct OperatorArgs {
    #[arg(long)]
    pub k: i64,
    /// Indices of the harmonic series, comma separated.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', default_values_t = [-2, -1, 0, 1])]
    pub n: Vec<i64>,
    #[arg(long, allow_hyphen_values = true, default_value = "0.13+1.21i")]
    pub base: String,
    /// Sample points, repeat or comma separate.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', default_values_t = ["0.41+0.87i".to_string(), "-0.23+1.42i".to_string(), "0.29+1.13i".to_string()])]
    pub z: Vec<String>,
    #[arg(long, default_value_t = 1e-3)]
    pub tolerance: f64,
    #[command(flatten)]
    pub trunc: Truncation,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Args, Debug)]
pub struct ParityArgs {
    #[arg(long, default_value_t = 2)]
    pub k: i64,
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', default_values_t = [-2, 0, 2, 4])]
    pub n: Vec<i64>,
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', default_values_t = ["0.41+0.87i".to_string(), "-0.23+1.42i".to_string(), "0.29+1.13i".to_string()])]
    pub z: Vec<String>,
    #[arg(long = "Ncd", visible_alias = "n-cd", default_value_t = 80)]
    pub n_cd: i64,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Args, Debug)]
pub struct DualityArgs {
    #[arg(long)]
    pub k: i64,
    #[arg(long, value_delimiter = ',', default_values_t = [0])]
    pub m: Vec<i64>,
    #[arg(long, value_delimiter = ',', default_values_t = [0])]
    pub n: Vec<i64>,
    #[arg(long, allow_hyphen_values = true, default_value = "0.11+1.31i")]
    pub z1: String,
    #[arg(long, allow_hyphen_values = true, default_value = "-0.23+0.97i")]
    pub z2: String,
    #[arg(long, default_value_t = 0.1)]
    pub radius: f64,
    #[arg(long, default_value_t = 0.06)]
    pub radius2: f64,
    #[arg(long = "Mquad", visible_alias = "m-quad", default_value_t = 64)]
    pub m_quad: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub tolerance: f64,
    /// Compare the sides divided by the heights of their expansion points.
    #[arg(long)]
    pub height_normalized: bool,
    #[command(flatten)]
    pub trunc: Truncation,
    #[command(flatten)]
    pub out: Output,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Psi,
    P,
    Duality,
    Operator,
}

#[derive(Args, Debug)]
pub struct ConvergenceArgs {
    #[arg(long, value_enum)]
    pub target: Target,
    #[arg(long)]
    pub k: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
    pub n: i64,
    #[arg(long, default_value_t = 0)]
    pub m: i64,
    /// Base point (first point for duality).
    #[arg(long, allow_hyphen_values = true)]
    pub base: String,
    /// Evaluation point (second point for duality).
    #[arg(long, allow_hyphen_values = true)]
    pub z: String,
    /// Truncation levels, comma separated and increasing.
    #[arg(long = "N-list", visible_alias = "n-list", value_delimiter = ',', default_values_t = [40, 80, 160])]
    pub n_list: Vec<i64>,
    #[arg(long, default_value_t = 0.1)]
    pub radius: f64,
    #[arg(long, default_value_t = 0.06)]
    pub radius2: f64,
    #[arg(long = "Mquad", visible_alias = "m-quad", default_value_t = 64)]
    pub m_quad: usize,
    #[command(flatten)]
    pub out: Output,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(commands::EXIT_CONFIG),
            };
        }
    };
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code_for(&e))
        }
    }
}
