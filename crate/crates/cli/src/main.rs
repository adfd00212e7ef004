//! `levy-mart`: batch front end for the multiplier, simulation and
//! verification routines.

mod commands;
mod config;
mod output;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::Format;

/// Environment variable holding the default worker count.
const THREADS_ENV: &str = "LEVY_MART_THREADS";

#[derive(Parser, Debug)]
#[command(name = "levy-mart", version, about = "Lévy multipliers, martingale transforms and their checks")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// JSON config for the subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed; overrides the config's `seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lévy-Khintchine symbol ρ(ξ) of a triple on R^n.
    Symbol,
    /// Multiplier m(ξ) of a transform pair (A, ψ) on R^n.
    Multiplier,
    /// Irreps of T1, T2 or SU(2) up to a cutoff.
    Dual {
        #[arg(long)]
        group: String,
        #[arg(long)]
        cutoff: u32,
    },
    /// Symbol matrices m(π) on the unitary dual.
    SymbolGroup,
    /// Applies a symbol to a trigonometric polynomial on a torus grid.
    Apply,
    /// Lower bounds on the L^p operator norm of a symbol.
    NormSearch,
    /// Simulates martingale transcripts and summarizes the checks.
    Simulate {
        /// Also write per-path transcripts as gzipped JSON lines.
        #[arg(long)]
        transcripts: Option<PathBuf>,
    },
    /// Runs acceptance criteria (all when none are named).
    Verify {
        /// Criterion numbers or names.
        criteria: Vec<String>,
        /// Monte Carlo paths per ensemble.
        #[arg(long)]
        paths: Option<usize>,
    },
    /// Burkholder, Choi and interval constants.
    Constants {
        #[arg(long)]
        p: f64,
        #[arg(long = "b", allow_hyphen_values = true)]
        b: Option<f64>,
        #[arg(long = "B", allow_hyphen_values = true)]
        big_b: Option<f64>,
    },
}

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or configuration.
    Config(String),
    /// The numerics failed on a valid configuration.
    Numeric(String),
    Io(String),
    /// `verify` ran but some criteria failed.
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Failed(_) => 1,
            Self::Config(_) => 2,
            Self::Numeric(_) => 3,
            Self::Io(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Config(m) => write!(f, "bad config: {m}"),
            Self::Numeric(m) => write!(f, "numerical failure: {m}"),
            Self::Io(m) => write!(f, "i/o error: {m}"),
            Self::Failed(m) => write!(f, "{m}"),
        }
    }
}

impl From<levy_mart::Error> for CliError {
    fn from(e: levy_mart::Error) -> Self {
        use levy_mart::Error as E;
        match e {
            E::InvalidInput(_)
            | E::NotPositiveSemidefinite { .. }
            | E::NotSymmetric { .. }
            | E::InvalidExponent(_)
            | E::InvalidInterval { .. }
            | E::Aliasing { .. } => Self::Config(e.to_string()),
            _ => Self::Numeric(e.to_string()),
        }
    }
}

fn init_threads(requested: Option<usize>) -> Result<(), CliError> {
    let n = match requested {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => Some(
                v.parse()
                    .map_err(|_| CliError::Config(format!("{THREADS_ENV}={v} is not a thread count")))?,
            ),
            Err(_) => None,
        },
    };
    if let Some(n) = n {
        if n == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Io(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_threads(cli.global.threads)?;
    let g = &cli.global;
    let (report, prov) = match cli.command {
        Command::Symbol => commands::symbol(g)?,
        Command::Multiplier => commands::multiplier(g)?,
        Command::Dual { group, cutoff } => commands::dual(&group, cutoff)?,
        Command::SymbolGroup => commands::symbol_group(g)?,
        Command::Apply => commands::apply(g)?,
        Command::NormSearch => commands::norm_search(g)?,
        Command::Simulate { transcripts } => commands::simulate(g, transcripts.as_deref())?,
        Command::Verify { criteria, paths } => {
            let (report, prov, failed) = commands::verify(g, &criteria, paths)?;
            output::emit(&output::render(&report, &prov, g.format)?, g.out.as_deref())?;
            if !failed.is_empty() {
                return Err(CliError::Failed(format!("failed criteria: {}", failed.join(", "))));
            }
            return Ok(());
        }
        Command::Constants { p, b, big_b } => commands::constants(p, b, big_b)?,
    };
    output::emit(&output::render(&report, &prov, g.format)?, g.out.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("levy-mart: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
