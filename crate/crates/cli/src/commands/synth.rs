use std::io::Write;

use anyhow::{Context, Result};

use teamdiv_core::write_jsonl;
use teamdiv_synth::{generate_corpus, CORPUS_FILE, H_INDEX_FILE, TRUTH_FILE};

use super::{finish, Ctx};
use crate::output::Staging;
use crate::{Command, Status};

pub fn run(ctx: &Ctx) -> Result<Status> {
    let cfg = &ctx.cfg.synth;
    let out = generate_corpus(cfg).context("generating corpus")?;
    let mut st = Staging::new(&ctx.cfg.output_dir)?;

    let mut w = st.create(CORPUS_FILE)?;
    write_jsonl(&out.records, &mut w)?;
    w.flush()?;
    drop(w);
    st.json(TRUTH_FILE, &ctx.hash, "ground_truth", &out.truth)?;
    let mut w = st.create(H_INDEX_FILE)?;
    out.h_index.write_tsv(&mut w)?;
    w.flush()?;
    drop(w);

    finish(ctx, Command::Synth, cfg.seed, &[], st)?;
    Ok(Status::Success)
}
