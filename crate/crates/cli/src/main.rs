use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sumprod_cli::commands::{run_analyze, run_certify, run_gen, run_verify, AnalyzeOptions, OutputFormat};
use sumprod_cli::error::CliError;
use sumprod_cli::family::{FamilyKind, FamilySpec};
use sumprod_core::notation::Ambient;
use sumprod_core::report::Budgets;

/// Exact sum-product growth experiments over Laurent and p-adic ambients.
#[derive(Parser)]
#[command(name = "sumprod", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a set file from a named family.
    Gen {
        /// Family kind.
        #[arg(long, value_enum)]
        family: FamilyKind,
        /// Ambient descriptor, e.g. `field:p=2`, `field:p=2,e=2,modulus=1,1,1`,
        /// or `padic:p=3`.
        #[arg(long)]
        ambient: Option<String>,
        /// Size parameter (for monomials: the top exponent, giving n+1 elements).
        #[arg(long, default_value_t = 10)]
        n: usize,
        /// Degree bound for interval and random_poly families.
        #[arg(long, default_value_t = 6)]
        degree: usize,
        /// Seed for randomized families; falls back to $SUMPROD_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        /// Start element literal for progressions.
        #[arg(long)]
        start: Option<String>,
        /// Step (or ratio, for geom_prog) element literal.
        #[arg(long)]
        step: Option<String>,
        /// Input set file (custom_file family only).
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Output path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute growth reports for one or more set files.
    Analyze {
        /// Input set files; rows are emitted in sorted input order.
        inputs: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
        /// Output path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for independent inputs.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Largest accepted set size.
        #[arg(long = "max-size", default_value_t = 512)]
        max_size: usize,
        /// Work cap for energy computations (map entries).
        #[arg(long = "energy-budget", default_value_t = 100_000_000)]
        energy_budget: u128,
    },
    /// Emit and re-verify a certificate bundle for one set file.
    Certify {
        #[arg(long = "in")]
        input: PathBuf,
        /// Output path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long = "max-size", default_value_t = 512)]
        max_size: usize,
        #[arg(long = "energy-budget", default_value_t = 100_000_000)]
        energy_budget: u128,
    },
    /// Run a fixed-seed invariant suite: balls, arithmetic, energy, lemmas, all.
    Verify { suite: String },
}

fn env_seed() -> u64 {
    std::env::var("SUMPROD_SEED")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(0)
}

fn write_out(out: Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Gen { family, ambient, n, degree, seed, start, step, input, out } => {
            let ambient = match ambient {
                Some(text) => Some(Ambient::parse(&text)?),
                None => None,
            };
            let spec = FamilySpec {
                kind: family,
                ambient,
                n,
                degree,
                seed: seed.unwrap_or_else(env_seed),
                start,
                step,
                input,
            };
            let text = run_gen(&spec)?;
            write_out(out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Analyze { inputs, format, out, jobs, max_size, energy_budget } => {
            let opts = AnalyzeOptions {
                inputs,
                format,
                jobs: jobs.max(1),
                budgets: Budgets { max_size, energy_budget },
            };
            let text = run_analyze(&opts)?;
            write_out(out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Certify { input, out, max_size, energy_budget } => {
            let budgets = Budgets { max_size, energy_budget };
            let (bundle, text) = run_certify(&input, &budgets)?;
            write_out(out, &text)?;
            if bundle.all_pass() {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("certify: at least one check failed");
                Ok(ExitCode::from(1))
            }
        }
        Command::Verify { suite } => {
            let (text, pass) = run_verify(&suite)?;
            print!("{text}");
            if pass {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("sumprod: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
