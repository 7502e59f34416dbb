//! `teamdiv` pipeline orchestration: one config file, one subcommand per
//! analysis, every run recorded in `manifest.json`.

pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

use anyhow::Result;
use clap::{Parser, Subcommand};

pub use config::PipelineConfig;
pub use output::{Manifest, RunRecord};

#[derive(Debug, Parser)]
#[command(name = "teamdiv", version, about = "Team structure, disruption and integration analyses")]
pub struct Cli {
    /// Pipeline config file (TOML).
    #[arg(long, global = true, default_value = "teamdiv.toml")]
    pub config: PathBuf,
    /// Worker threads for parallel stages; defaults to all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Overrides the master seed in the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Exit with status 2 when the matched sample fails the balance check.
    #[arg(long, global = true)]
    pub require_balance: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Generate a seeded synthetic corpus with ground truth.
    Synth,
    /// Compute the per-paper metric table.
    Metrics,
    /// Main and interaction regressions, per-discipline sweep and margins.
    Regress,
    /// Propensity-score matching, quartile contrast and decile sweep.
    Psm,
    /// Pre-post comparison around the cutoff year.
    Prepost,
    /// Mediation of the exposure effect through the mediator.
    Mediate,
    /// Binned means and linear fits of the outcome on each predictor.
    BinFit,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Synth => "synth",
            Command::Metrics => "metrics",
            Command::Regress => "regress",
            Command::Psm => "psm",
            Command::Prepost => "prepost",
            Command::Mediate => "mediate",
            Command::BinFit => "bin-fit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    /// Outputs were written but the matched sample is not balanced.
    Unbalanced,
}

/// Runs one subcommand. The thread count only applies when the global pool
/// has not been built yet.
pub fn run(cli: &Cli) -> Result<Status> {
    if let Some(n) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let (cfg, hash) = PipelineConfig::load(&cli.config, cli.seed)?;
    let ctx = commands::Ctx {
        cfg,
        hash,
        require_balance: cli.require_balance,
    };
    commands::dispatch(&ctx, cli.command)
}
