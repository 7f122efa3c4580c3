//! `qellip`: moments, sweeps, densities and ellipsometric noise bars from the command line.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod error;
mod family;
mod output;

use family::{FamilyKind, FamilyParams};
use output::Format;

#[derive(Debug, Parser)]
#[command(name = "qellip", version, about = "Quantum-limited ellipsometry toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Moment report for one state.
    State(StateArgs),
    /// Moment table over a list of N̄ with log-log scaling fits.
    Sweep(SweepArgs),
    /// Mathieu phase density next to its von Mises approximations, plus the |Ψ_ℓ|² spectrum.
    Density(DensityArgs),
    /// (ψ, Δ) of a layer stack, optionally with quantum noise bars.
    Ellipsometry(EllipsometryArgs),
    /// Mathieu eigenvalues, variances and leading coefficients.
    MathieuTable(MathieuTableArgs),
}

#[derive(Debug, clap::Args)]
pub struct StateArgs {
    #[arg(long, value_enum)]
    pub family: FamilyKind,
    /// Mean photon number. Phase families need an even integer (the embedding layer);
    /// without it they are reported from phase space alone with nbar = 0.
    #[arg(long)]
    pub nbar: Option<f64>,
    #[command(flatten)]
    pub params: FamilyParams,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct SweepArgs {
    /// TOML config; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub family: Option<FamilyKind>,
    /// Comma-separated N̄ values.
    #[arg(long, value_delimiter = ',')]
    pub n_list: Option<Vec<f64>>,
    /// Comma-separated subset of e_var,l_var,p_var,rho_var (default: all).
    #[arg(long, value_delimiter = ',')]
    pub targets: Option<Vec<String>>,
    #[command(flatten)]
    pub params: FamilyParams,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct DensityArgs {
    #[arg(long)]
    pub q: f64,
    /// Equispaced samples over [0, 2π).
    #[arg(long, default_value_t = 256)]
    pub grid: usize,
    /// Density CSV path.
    #[arg(short, long)]
    pub output: PathBuf,
    /// Spectrum CSV path (default: `<output stem>_spectrum.csv` alongside).
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct EllipsometryArgs {
    /// Stack description file.
    pub stack: PathBuf,
    /// Input state for the noise bars.
    #[arg(long, value_enum, requires = "nbar")]
    pub family: Option<FamilyKind>,
    #[arg(long, requires = "family")]
    pub nbar: Option<f64>,
    #[command(flatten)]
    pub params: FamilyParams,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct MathieuTableArgs {
    /// Comma-separated q values.
    #[arg(long, value_delimiter = ',', required = true)]
    pub q: Vec<f64>,
    /// Highest order index k (ce_2k), inclusive.
    #[arg(long, default_value_t = 0)]
    pub max_order: usize,
    /// Number of leading coefficients A_0, A_2, ... to dump.
    #[arg(long, default_value_t = 6)]
    pub coefficients: usize,
    /// Fixed truncation J (default: automatic).
    #[arg(long)]
    pub truncation: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::State(a) => commands::state(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Density(a) => commands::density(a),
        Command::Ellipsometry(a) => commands::ellipsometry(a),
        Command::MathieuTable(a) => commands::mathieu_table(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
