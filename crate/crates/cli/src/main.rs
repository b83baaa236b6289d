//! `povm-entropy` command-line front end.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use povm_entropy::{EntropyKernel, Family};

pub const DEFAULT_GRID: usize = 200_000;
pub const DEFAULT_PRECISION: u32 = 200;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(name = "povm-entropy", version, about = "Entropy of highly symmetric qubit measurements")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Report entropies in bits instead of nats.
    #[arg(long, global = true)]
    pub bits: bool,

    /// Output format (each subcommand has its own default).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Seed for the random test directions of `validate`.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Min,
    Max,
}

/// A catalog family or a POVM file.
#[derive(Debug, Args)]
pub struct Source {
    /// Family name: digon, tetrahedron, ..., ngon:N, rectangle:ALPHA.
    #[arg(long, value_parser = parse_family, required_unless_present = "povm")]
    pub family: Option<Family>,

    /// POVM JSON file, as written by `generate`.
    #[arg(long, conflicts_with = "family")]
    pub povm: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the Bloch vectors of a family to a POVM file.
    Generate {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Frame, design and symmetry diagnostics.
    Validate {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Entropy and relative entropy on a Fibonacci lattice.
    EntropyMap {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[arg(long, value_parser = parse_kernel, default_value = "shannon")]
        kernel: EntropyKernel,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Global extrema of the entropy.
    Minimize {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[arg(long, value_enum, default_value = "min")]
        mode: ModeArg,
        #[arg(long, alias = "out")]
        report: Option<PathBuf>,
    },
    /// Classify a point on a rotation axis, or every global extremum.
    Classify {
        #[command(flatten)]
        source: Source,
        /// Point as `x,y,z`; omitted means all global minima and maxima.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hermite interpolation certificate for the minimizers.
    Certify {
        /// Family name or `all`.
        #[arg(long)]
        family: String,
        /// Starting precision (bits) of the interval Sturm step.
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: u32,
        /// Generalized kernel (`tsallis:A`, `renyi:A`); default Shannon.
        #[arg(long, value_parser = parse_kernel)]
        kernel: Option<EntropyKernel>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Informational power of a family, of all families, or of polygons.
    InfoPower {
        /// Family name or `all`.
        #[arg(long, required_unless_present = "ngon_sweep")]
        family: Option<String>,
        /// Polygon range `A..B` (inclusive).
        #[arg(long, conflicts_with = "family")]
        ngon_sweep: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Informational power of regular polygons over a range of n.
    NgonSweep {
        /// Range `A..B` (inclusive).
        #[arg(default_value = "3..64")]
        range: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dynamical entropy of a repeated measurement under a rotation.
    Dynent {
        #[command(flatten)]
        source: Source,
        /// `axis=x|y|z|a:b:c,angle=RAD`.
        #[arg(long, default_value = "axis=z,angle=0")]
        rotation: String,
        /// Also enumerate sequences up to this length.
        #[arg(long)]
        block: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rectangle bifurcation threshold and minimizer structure.
    Bifurcation {
        #[arg(long = "alpha", default_values_t = [0.8, 1.4])]
        alphas: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Informational power table with deltas against the reference values.
    Table5 {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: povm_entropy::Error| e.to_string())
}

fn parse_kernel(s: &str) -> Result<EntropyKernel, String> {
    s.parse().map_err(|e: povm_entropy::Error| e.to_string())
}

fn configure_threads() -> Result<(), commands::Usage> {
    let Ok(v) = std::env::var("POVM_ENTROPY_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| commands::Usage(format!("POVM_ENTROPY_THREADS must be a positive integer, got `{v}`")))?;
    // Fails only if a pool already exists, which cannot happen this early.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code().clamp(0, 255) as u8);
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {}", e.0);
        return ExitCode::from(2);
    }
    match commands::run(&cli) {
        Ok(commands::Outcome::Success) => ExitCode::SUCCESS,
        Ok(commands::Outcome::CheckFailed(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code_for(&e))
        }
    }
}
