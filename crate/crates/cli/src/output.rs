//! Staged output files and the run manifest.
//!
//! Every subcommand writes into `.partial` files first. They are renamed into
//! place only after the whole subcommand succeeded; dropping an uncommitted
//! [`Staging`] deletes them.

use std::fs::{self, File};
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const MANIFEST_SCHEMA: &str = "teamdiv-manifest/v1";

pub struct Staging {
    dir: PathBuf,
    files: Vec<(PathBuf, String)>,
    committed: bool,
}

impl Staging {
    pub fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating output directory {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
            committed: false,
        })
    }

    /// Registers `name` and returns the temporary path to write it to.
    pub fn path(&mut self, name: &str) -> PathBuf {
        let tmp = self.dir.join(format!(".{name}.partial"));
        self.files.push((tmp.clone(), name.to_string()));
        tmp
    }

    pub fn create(&mut self, name: &str) -> Result<BufWriter<File>> {
        let path = self.path(name);
        let f = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        Ok(BufWriter::new(f))
    }

    /// JSON object `{"config_hash": .., key: value}`, pretty printed.
    pub fn json<T: Serialize>(&mut self, name: &str, hash: &str, key: &str, value: &T) -> Result<()> {
        let mut map = serde_json::Map::new();
        map.insert("config_hash".into(), hash.into());
        map.insert(key.into(), serde_json::to_value(value)?);
        let mut w = self.create(name)?;
        serde_json::to_writer_pretty(&mut w, &map)?;
        w.write_all(b"\n")?;
        w.flush()?;
        Ok(())
    }

    /// CSV with a leading `# <stem> config=<hash>` line.
    pub fn csv<T: Serialize>(&mut self, name: &str, hash: &str, rows: &[T]) -> Result<()> {
        let mut w = self.create(name)?;
        writeln!(w, "# {} config={hash}", name.trim_end_matches(".csv"))?;
        let mut c = csv::Writer::from_writer(w);
        for r in rows {
            c.serialize(r)?;
        }
        c.flush()?;
        Ok(())
    }

    /// Moves every staged file into place and returns the final paths.
    pub fn commit(mut self) -> Result<Vec<PathBuf>> {
        let mut out = Vec::with_capacity(self.files.len());
        for (tmp, name) in &self.files {
            let dst = self.dir.join(name);
            fs::rename(tmp, &dst).with_context(|| format!("moving {} into place", dst.display()))?;
            out.push(dst);
        }
        self.committed = true;
        Ok(out)
    }
}

impl Drop for Staging {
    fn drop(&mut self) {
        if !self.committed {
            for (tmp, _) in &self.files {
                let _ = fs::remove_file(tmp);
            }
        }
    }
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let mut f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut h = Sha256::new();
    let mut buf = vec![0u8; 1 << 16];
    loop {
        let n = f.read(&mut buf)?;
        if n == 0 {
            break;
        }
        h.update(&buf[..n]);
    }
    Ok(hex::encode(h.finalize()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    /// Relative to the output directory when inside it.
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub subcommand: String,
    pub config_hash: String,
    pub seed: Option<u64>,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    /// Earlier runs whose outputs this run consumed, found by digest.
    pub upstream: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema: String,
    pub tool_version: String,
    pub runs: Vec<RunRecord>,
}

impl Default for Manifest {
    fn default() -> Self {
        Self {
            schema: MANIFEST_SCHEMA.into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            runs: Vec::new(),
        }
    }
}

fn display_path(path: &Path, dir: &Path) -> String {
    let parent = dir.parent().unwrap_or(dir);
    path.strip_prefix(dir)
        .or_else(|_| path.strip_prefix(parent))
        .unwrap_or(path)
        .to_string_lossy()
        .replace('\\', "/")
}

pub fn digests(paths: &[PathBuf], dir: &Path) -> Result<Vec<FileDigest>> {
    paths
        .iter()
        .map(|p| {
            Ok(FileDigest {
                path: display_path(p, dir),
                sha256: sha256_file(p)?,
            })
        })
        .collect()
}

impl Manifest {
    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST_FILE);
        if !path.exists() {
            return Ok(Self::default());
        }
        let text = fs::read_to_string(&path)?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn run(&self, subcommand: &str) -> Option<&RunRecord> {
        self.runs.iter().find(|r| r.subcommand == subcommand)
    }

    /// Adds or replaces the record for `rec.subcommand`, filling in its
    /// upstream links.
    pub fn record(&mut self, mut rec: RunRecord) {
        rec.upstream = self
            .runs
            .iter()
            .filter(|r| r.subcommand != rec.subcommand)
            .filter(|r| rec.inputs.iter().any(|i| r.outputs.contains(i)))
            .map(|r| r.subcommand.clone())
            .collect();
        match self.runs.iter_mut().find(|r| r.subcommand == rec.subcommand) {
            Some(slot) => *slot = rec,
            None => self.runs.push(rec),
        }
    }

    pub fn save(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(MANIFEST_FILE);
        let tmp = dir.join(format!(".{MANIFEST_FILE}.partial"));
        let mut w = BufWriter::new(File::create(&tmp)?);
        serde_json::to_writer_pretty(&mut w, self)?;
        w.write_all(b"\n")?;
        w.flush()?;
        drop(w);
        fs::rename(&tmp, &path)?;
        Ok(path)
    }
}
