pub mod analyses;
pub mod metrics;
pub mod regress;
pub mod synth;

use std::path::PathBuf;

use anyhow::{bail, Result};

use teamdiv_core::{read_rows, MetricRow};

use crate::config::PipelineConfig;
use crate::output::{digests, Manifest, RunRecord, Staging};
use crate::{Command, Status};

pub const METRIC_ROWS_FILE: &str = "metric_rows.csv";

pub struct Ctx {
    pub cfg: PipelineConfig,
    pub hash: String,
    pub require_balance: bool,
}

pub fn dispatch(ctx: &Ctx, command: Command) -> Result<Status> {
    match command {
        Command::Synth => synth::run(ctx),
        Command::Metrics => metrics::run(ctx),
        Command::Regress => regress::run(ctx),
        Command::Psm => analyses::psm(ctx),
        Command::Prepost => analyses::prepost(ctx),
        Command::Mediate => analyses::mediate(ctx),
        Command::BinFit => analyses::bin_fit(ctx),
    }
}

/// Commits the staged outputs and records the run in the manifest.
fn finish(ctx: &Ctx, command: Command, seed: Option<u64>, inputs: &[PathBuf], staging: Staging) -> Result<()> {
    let dir = &ctx.cfg.output_dir;
    let inputs = digests(inputs, dir)?;
    let outputs = staging.commit()?;
    let mut manifest = Manifest::load(dir)?;
    manifest.record(RunRecord {
        subcommand: command.name().to_string(),
        config_hash: ctx.hash.clone(),
        seed,
        inputs,
        outputs: digests(&outputs, dir)?,
        upstream: Vec::new(),
    });
    manifest.save(dir)?;
    Ok(())
}

/// The metric table written by `metrics`, after the configured filters.
fn load_rows(ctx: &Ctx) -> Result<(Vec<MetricRow>, PathBuf)> {
    let path = ctx.cfg.output_dir.join(METRIC_ROWS_FILE);
    if !path.is_file() {
        bail!("{} not found: run metrics first", path.display());
    }
    let file = std::fs::File::open(&path)?;
    let (rows, _) = read_rows(std::io::BufReader::new(file))?;
    let f = &ctx.cfg.filters;
    let rows = rows
        .into_iter()
        .filter(|r| f.disciplines.is_empty() || f.disciplines.contains(&r.discipline))
        .filter(|r| !f.nsf_only || r.nsf_funded == 1)
        .filter(|r| f.year_min.is_none_or(|y| r.year >= y))
        .filter(|r| f.year_max.is_none_or(|y| r.year <= y))
        .collect();
    Ok((rows, path))
}
