//! Seeded synthetic corpora with planted team structure, disruption,
//! integration and policy-shock effects, plus the matching ground truth.

pub mod config;
pub mod di;
pub mod error;
pub mod generate;
pub mod relations;
pub mod structure;
pub mod truth;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

pub use config::SynthConfig;
pub use error::{Result, SynthError};
pub use generate::{generate_corpus, SynthOutput};
pub use relations::{binned_relations, Relation};
pub use truth::{GroundTruth, PaperTruth};

pub const CORPUS_FILE: &str = "corpus.jsonl";
pub const TRUTH_FILE: &str = "ground_truth.json";
pub const H_INDEX_FILE: &str = "h_index.tsv";

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|source| SynthError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> SynthError + '_ {
    move |source| SynthError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Writes the corpus, ground truth and h-index table into `dir` and returns
/// the three paths.
pub fn write_outputs(out: &SynthOutput, dir: &Path) -> Result<[PathBuf; 3]> {
    let corpus = dir.join(CORPUS_FILE);
    let truth = dir.join(TRUTH_FILE);
    let h_index = dir.join(H_INDEX_FILE);
    let mut w = create(&corpus)?;
    teamdiv_core::write_jsonl(&out.records, &mut w)?;
    w.flush().map_err(io_err(&corpus))?;
    let mut w = create(&truth)?;
    serde_json::to_writer_pretty(&mut w, &out.truth)?;
    w.write_all(b"\n").map_err(io_err(&truth))?;
    w.flush().map_err(io_err(&truth))?;
    let mut w = create(&h_index)?;
    out.h_index.write_tsv(&mut w)?;
    w.flush().map_err(io_err(&h_index))?;
    Ok([corpus, truth, h_index])
}
