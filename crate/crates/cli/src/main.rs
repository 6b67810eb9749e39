//! `valuewalk`: tabulate, simulate, optimise, compare and verify pricing
//! schemes for goods whose value evolves with use.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 bad configuration.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use config::{ConfigError, ExperimentConfig, Overrides};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "valuewalk", version, about)]
#[command(long_about = "Pricing experiments for goods whose per-use value evolves with consumption.\n\n\
Configuration is a JSON file (see README); every field is optional except master_seed for \
commands that sample. Defaults: distribution uniform, process walk with delta 0.1, schemes \
[ppp 0.5, optimal bin], profiles [0], n_samples 100000, grid_resolution 1000, slack_constant 10, \
mc_scale 1. Flags override the file.")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON experiment configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed for all Monte Carlo replicas.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of Monte Carlo replicas.
    #[arg(long, global = true)]
    n: Option<u64>,
    /// Step size of the walk (must be 1/k for an integer k >= 2).
    #[arg(long, global = true)]
    delta: Option<f64>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate hitting times, cumulative values and thresholds over initial values.
    Analyze,
    /// Monte Carlo estimates for every scheme and risk profile.
    Simulate,
    /// Optimal one-off and constant per-usage prices per risk profile.
    Optimize,
    /// Revenue, welfare and utility of two or more schemes side by side.
    Compare,
    /// Run the acceptance suite; exits 1 if any check fails.
    Verify {
        /// Only these criteria (comma separated, 1 to 12).
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<u8>>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let overrides = Overrides {
        seed: cli.seed,
        n: cli.n,
        delta: cli.delta,
        out: cli.out.clone(),
    };
    let run = || -> Result<bool, ConfigError> {
        let mut cfg = ExperimentConfig::load(cli.config.as_deref(), &overrides)?;
        let out = match &cli.command {
            Command::Analyze => commands::analyze(&cfg, cli.format)?,
            Command::Simulate => commands::simulate(&cfg, cli.format)?,
            Command::Optimize => commands::optimize(&cfg, cli.format)?,
            Command::Compare => commands::compare(&cfg, cli.format)?,
            Command::Verify { only } => {
                if only.is_some() {
                    cfg.criteria = only.clone();
                    cfg.validate()?;
                }
                commands::verify(&cfg, cli.format)?
            }
        };
        commands::emit(&out.text, cfg.output.as_deref())?;
        Ok(out.ok)
    };
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
