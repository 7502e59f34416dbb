//! Pipeline configuration file.
//!
//! Relative paths are resolved against the directory holding the config file,
//! so a config and its outputs can be moved together.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use teamdiv_causal::{MediationConfig, PrePostConfig, PsmConfig, DEFAULT_COVARIATES};
use teamdiv_core::Discipline;
use teamdiv_stats::CovarianceKind;
use teamdiv_synth::SynthConfig;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InputPaths {
    /// JSON Lines corpus; defaults to `corpus.jsonl` in the output directory.
    pub corpus: Option<PathBuf>,
    /// Field-name mapping for the corpus (TOML).
    pub schema: Option<PathBuf>,
    /// Promotional-word lexicon, one word per line.
    pub lexicon: Option<PathBuf>,
    /// Institution h-index table (TSV).
    pub h_index: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricsSection {
    pub window_years: u32,
    pub cd_window: u32,
    pub team_size_cap: usize,
}

impl Default for MetricsSection {
    fn default() -> Self {
        Self {
            window_years: 5,
            cd_window: teamdiv_core::innovation::DEFAULT_CD_WINDOW,
            team_size_cap: teamdiv_core::graph::DEFAULT_TEAM_SIZE_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Filters {
    /// Discipline labels to keep; empty keeps all.
    pub disciplines: Vec<String>,
    pub nsf_only: bool,
    pub year_min: Option<i32>,
    pub year_max: Option<i32>,
    /// The pre-post report looks at funded papers only.
    pub prepost_nsf_only: bool,
}

impl Default for Filters {
    fn default() -> Self {
        Self {
            disciplines: Vec::new(),
            nsf_only: false,
            year_min: None,
            year_max: None,
            prepost_nsf_only: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RegressSection {
    pub outcome: String,
    pub exposure: String,
    pub controls: Vec<String>,
    /// Interacted with the exposure in the second model.
    pub moderator: String,
    pub fixed_effects: Vec<String>,
    pub covariance: CovarianceKind,
    pub per_discipline: bool,
    /// Exposure values for the margins table.
    pub margin_grid: Vec<f64>,
    /// Team sizes at which margins and slopes are evaluated (log taken).
    pub margin_team_sizes: Vec<u32>,
}

impl Default for RegressSection {
    fn default() -> Self {
        Self {
            outcome: "cd_norm".into(),
            exposure: "sd_std".into(),
            controls: DEFAULT_COVARIATES.iter().map(|s| s.to_string()).collect(),
            moderator: "log_team_size".into(),
            fixed_effects: vec!["year".into(), "discipline".into()],
            covariance: CovarianceKind::Classical,
            per_discipline: true,
            margin_grid: vec![-2.0, -1.0, 0.0, 1.0, 2.0],
            margin_team_sizes: vec![2, 3, 4, 6, 8, 10],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BinFitSection {
    pub outcome: String,
    pub predictors: Vec<String>,
    pub n_bins: usize,
}

impl Default for BinFitSection {
    fn default() -> Self {
        Self {
            outcome: "cd_norm".into(),
            predictors: vec!["sd".into(), "freshness".into(), "edge_density".into()],
            n_bins: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Master seed; when set it replaces the seeds of the synth, psm and
    /// mediation sections.
    pub seed: Option<u64>,
    pub output_dir: PathBuf,
    pub inputs: InputPaths,
    pub metrics: MetricsSection,
    pub filters: Filters,
    pub regress: RegressSection,
    pub psm: PsmConfig,
    pub prepost: PrePostConfig,
    pub mediation: MediationConfig,
    pub bin_fit: BinFitSection,
    pub synth: SynthConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            seed: None,
            output_dir: PathBuf::from("out"),
            inputs: InputPaths::default(),
            metrics: MetricsSection::default(),
            filters: Filters::default(),
            regress: RegressSection::default(),
            psm: PsmConfig::default(),
            prepost: PrePostConfig::default(),
            mediation: MediationConfig::default(),
            bin_fit: BinFitSection::default(),
            synth: SynthConfig::default(),
        }
    }
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).context("parsing pipeline config")?;
        Ok(cfg)
    }

    /// Reads the file, applies a seed override, validates and resolves
    /// relative paths against the file's directory. Returns the config and its
    /// hash.
    pub fn load(path: &Path, seed_override: Option<u64>) -> Result<(Self, String)> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg = Self::from_toml(&text).with_context(|| format!("in {}", path.display()))?;
        if seed_override.is_some() {
            cfg.seed = seed_override;
        }
        cfg.apply_seed();
        cfg.validate()?;
        let hash = cfg.hash();
        cfg.resolve_paths(path.parent().unwrap_or(Path::new(".")));
        Ok((cfg, hash))
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.output_dir);
        for p in [
            &mut self.inputs.corpus,
            &mut self.inputs.schema,
            &mut self.inputs.lexicon,
            &mut self.inputs.h_index,
        ]
        .into_iter()
        .flatten()
        {
            fix(p);
        }
    }

    pub fn apply_seed(&mut self) {
        if let Some(s) = self.seed {
            self.synth.seed = Some(s);
            self.psm.seed = s;
            self.mediation.seed = s;
        }
    }

    pub fn validate(&self) -> Result<()> {
        teamdiv_core::corpus::check_window(self.metrics.window_years)?;
        if !(1..=20).contains(&self.metrics.cd_window) {
            bail!("metrics.cd_window must be in 1..=20, got {}", self.metrics.cd_window);
        }
        if self.metrics.team_size_cap < 2 {
            bail!("metrics.team_size_cap must be at least 2");
        }
        for d in &self.filters.disciplines {
            d.parse::<Discipline>()?;
        }
        if let (Some(lo), Some(hi)) = (self.filters.year_min, self.filters.year_max) {
            if lo > hi {
                bail!("filters.year_min {lo} is after filters.year_max {hi}");
            }
        }
        if self.regress.margin_team_sizes.contains(&0) {
            bail!("regress.margin_team_sizes must be positive");
        }
        if self.bin_fit.n_bins < 2 {
            bail!("bin_fit.n_bins must be at least 2");
        }
        Ok(())
    }

    pub fn corpus_path(&self) -> PathBuf {
        self.inputs
            .corpus
            .clone()
            .unwrap_or_else(|| self.output_dir.join(teamdiv_synth::CORPUS_FILE))
    }

    /// SHA-256 of the canonical JSON form of the config, taken before paths
    /// are resolved so that it does not depend on where the project lives.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&bytes))
    }
}

/// Fails with a message naming the file's role when a configured input is
/// missing.
pub fn require_file(path: &Path, role: &str) -> Result<()> {
    if !path.is_file() {
        bail!("{role} file {} does not exist", path.display());
    }
    Ok(())
}
