//! `pgcode`: build, classify and decompose codewords of the code of points
//! and hyperplanes of PG(n, q), and run the machine checks.
//!
//! Exit status is 0 on success, 2 when a check is falsified or a
//! decomposition fails, and 1 on usage or input errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod dto;

#[derive(Debug, Parser)]
#[command(name = "pgcode", version, about = "Codes of points and hyperplanes of PG(n,q)")]
pub struct Cli {
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Include wall-clock runtimes in reports. Off by default so reruns are byte-identical.
    #[arg(long, global = true)]
    timing: bool,
    /// Log progress to stderr (repeat for more).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a codeword and write it with a JSON recipe sidecar.
    Construct(ConstructArgs),
    /// Type of a codeword on the whole space or on a flat.
    Classify(ClassifyArgs),
    /// Vertex, value plane and hyperplane terms of a small-weight codeword.
    Decompose(DecomposeArgs),
    /// Exhaustive weight distribution of the code.
    Spectrum(SpectrumArgs),
    /// Run one family of checks and print one JSON report per claim.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Hyperplane,
    TwoHyperplanes,
    Bagchi,
    GeneralizedOdd,
    Cone,
    RandomSmall,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pgcode,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(value_enum)]
    pub family: Family,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub q: Option<u64>,
    /// Prime for the plane families `bagchi` and `generalized-odd`.
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Plane type of the base word of a cone (T0, Tq1, T2q, T2q1, Todd, Ttriangle, Tstar).
    #[arg(long)]
    pub base: Option<String>,
    /// Hyperplane indices; drawn from the seed when absent.
    #[arg(long, value_delimiter = ',')]
    pub hyperplanes: Vec<usize>,
    /// Coefficients matching `--hyperplanes`.
    #[arg(long, value_delimiter = ',')]
    pub coeffs: Vec<u16>,
    /// Output path; the recipe goes next to it with extension `.recipe.json`.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
    /// Write the sparse `index:value` variant.
    #[arg(long)]
    pub sparse: bool,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    pub input: PathBuf,
    /// Restrict to the flat whose basis rows are in this file.
    #[arg(long)]
    pub flat: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub q: u64,
    /// Largest number of codewords to enumerate.
    #[arg(long, default_value_t = pgcode_core::verify::DEFAULT_BUDGET)]
    pub budget: u64,
    /// Keep witnesses only up to this weight.
    #[arg(long)]
    pub max_weight: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Claim {
    Appendix,
    Spectrum,
    Blocking,
    Lemmas,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub claim: Claim,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random instances for `blocking` and `lemmas`.
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    /// Check this codeword instead of random instances.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = pgcode_core::verify::DEFAULT_BUDGET)]
    pub budget: u64,
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
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).init();
    match commands::run(&cli) {
        Ok(commands::Exit::Ok) => ExitCode::SUCCESS,
        Ok(commands::Exit::Failed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
