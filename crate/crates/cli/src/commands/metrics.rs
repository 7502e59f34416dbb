use std::io::Write;

use anyhow::{bail, Context, Result};

use teamdiv_core::content::Lexicon;
use teamdiv_core::{compute_metrics, load_corpus, write_rows, HIndexTable, MetricsOptions, SchemaConfig};

use super::{finish, Ctx, METRIC_ROWS_FILE};
use crate::config::require_file;
use crate::output::Staging;
use crate::{Command, Status};

pub const SUMMARY_FILE: &str = "metrics_summary.json";
pub const REJECTS_FILE: &str = "metrics_rejects.csv";

pub fn run(ctx: &Ctx) -> Result<Status> {
    let cfg = &ctx.cfg;
    let corpus_path = cfg.corpus_path();
    if !corpus_path.is_file() {
        bail!(
            "corpus {} not found: run synth first or set inputs.corpus",
            corpus_path.display()
        );
    }
    let mut inputs = vec![corpus_path.clone()];
    for (path, role) in [
        (&cfg.inputs.schema, "schema"),
        (&cfg.inputs.lexicon, "lexicon"),
        (&cfg.inputs.h_index, "h-index"),
    ] {
        if let Some(p) = path {
            require_file(p, role)?;
            inputs.push(p.clone());
        }
    }

    let schema = match &cfg.inputs.schema {
        Some(p) => SchemaConfig::load(p)?,
        None => SchemaConfig::default(),
    };
    let lexicon = match &cfg.inputs.lexicon {
        Some(p) => Lexicon::load(p)?,
        None => Lexicon::builtin(),
    };
    let h_index = cfg.inputs.h_index.as_deref().map(HIndexTable::load).transpose()?;
    let opts = MetricsOptions {
        window_years: cfg.metrics.window_years,
        cd_window: cfg.metrics.cd_window,
        team_size_cap: cfg.metrics.team_size_cap,
        lexicon,
        h_index,
    };

    let corpus = load_corpus(&corpus_path, &schema).context("reading corpus")?;
    let (rows, summary) = compute_metrics(&corpus, &opts)?;

    let mut st = Staging::new(&cfg.output_dir)?;
    let mut w = st.create(METRIC_ROWS_FILE)?;
    write_rows(&rows, &ctx.hash, &mut w)?;
    w.flush()?;
    drop(w);
    st.json(SUMMARY_FILE, &ctx.hash, "summary", &summary)?;
    st.csv(REJECTS_FILE, &ctx.hash, &corpus.rejects)?;

    finish(ctx, Command::Metrics, None, &inputs, st)?;
    Ok(Status::Success)
}
