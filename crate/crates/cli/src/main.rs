//! `rkforge`: inspect, transform, certify and run Runge-Kutta tableaux.
//!
//! Exit status: 0 on success, 1 when the library reports a domain failure,
//! 2 on misuse (bad flags, unreadable input, out-of-range arguments).

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use input::UsageError;

#[derive(Parser, Debug)]
#[command(name = "rkforge", version, about = "Exact analysis of Runge-Kutta tableaux")]
pub struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,

    /// Absolute tolerance for float-kind tableaux.
    #[arg(long, global = true, env = "RKFORGE_TOL")]
    pub tol: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print a tableau with its structural properties.
    Show(InputArg),
    /// Apply the symmetric or symplectic adjoint.
    Adjoint(TransformArgs),
    /// Average a tableau with its symmetric or symplectic adjoint.
    Average(TransformArgs),
    /// Detect the order and list every tree condition.
    CheckOrder(CheckOrderArgs),
    /// Stability function and stability predicates.
    Stability(StabilityArgs),
    /// Build members of the six-stage fifth-order family.
    #[command(subcommand)]
    Construct(ConstructCommand),
    /// Integrate a test problem to a final time.
    Integrate(IntegrateArgs),
    /// Errors and observed orders under repeated step halving.
    Convergence(ConvergenceArgs),
    /// List the built-in methods, optionally writing them all to a directory.
    Catalog(CatalogArgs),
}

#[derive(Args, Debug)]
pub struct InputArg {
    /// Tableau JSON file, or `catalog:<key>` for a built-in method.
    pub input: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Symmetric,
    Symplectic,
}

#[derive(Args, Debug)]
pub struct TransformArgs {
    pub input: String,
    #[arg(long, value_enum)]
    pub kind: Kind,
    /// Output file; the tableau goes to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct CheckOrderArgs {
    pub input: String,
    /// Largest tree order examined.
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u8).range(1..=10))]
    pub max: u8,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Also test the simplified conditions, given as `p,eta,zeta`.
    #[arg(long, value_delimiter = ',')]
    pub simplified: Option<Vec<usize>>,
}

#[derive(Args, Debug)]
pub struct StabilityArgs {
    pub input: String,
    /// Sample the region `|R| <= 1` over `x_min,x_max,y_min,y_max`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub window: Option<Vec<f64>>,
    /// Grid size `nx,ny` for the region sample.
    #[arg(long, value_delimiter = ',', default_values_t = [201, 201])]
    pub grid: Vec<usize>,
    /// Region sample as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Region boundary as SVG.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum ConstructCommand {
    /// One member of the family.
    Ssrk5(ConstructArgs),
    /// Several values of `c2` with a shared `alpha`.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    /// Second node, e.g. `1/4` or `1/2+-1/6*sqrt5`.
    #[arg(long, allow_hyphen_values = true)]
    pub c2: String,
    /// Sixth-order stability coefficient times 720.
    #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Construction trace; defaults to `<out>.trace.json` next to `--out`.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Comma-separated `c2` values.
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub c2: Vec<String>,
    #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
    pub alpha: String,
    /// Directory receiving one tableau file per valid point.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Problem {
    Kepler,
    /// `y' = -y`, `y(0) = 1`.
    Decay,
}

#[derive(Args, Debug)]
pub struct IntegrateArgs {
    pub input: String,
    #[arg(long, value_enum, default_value_t = Problem::Kepler)]
    pub problem: Problem,
    #[arg(long)]
    pub h: f64,
    #[arg(long = "T", default_value_t = 1.0)]
    pub t_end: f64,
}

#[derive(Args, Debug)]
pub struct ConvergenceArgs {
    pub input: String,
    #[arg(long, value_enum, default_value_t = Problem::Kepler)]
    pub problem: Problem,
    #[arg(long, default_value_t = 0.2)]
    pub h0: f64,
    #[arg(long, default_value_t = 5)]
    pub halvings: usize,
    #[arg(long = "T", default_value_t = 1.0)]
    pub t_end: f64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct CatalogArgs {
    /// Write every catalog tableau as `<key>.json` into this directory.
    #[arg(long)]
    pub emit_all: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
