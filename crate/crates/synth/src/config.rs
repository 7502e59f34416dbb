//! Generator parameters, read from a `[synth]` config section.

use serde::{Deserialize, Serialize};
use teamdiv_core::Discipline;

use crate::error::{Result, SynthError};

/// Career ages of last authors are drawn from this range.
pub const CAREER_AGE_RANGE: (i32, i32) = (2, 12);
/// Earliest and latest years accepted by the default ingest schema.
pub const YEAR_BOUNDS: (i32, i32) = (1900, 2025);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    /// Required; there is no implicit seed.
    pub seed: Option<u64>,
    /// Number of focal papers. Support records (history, citers, library)
    /// come on top.
    pub n_papers: usize,
    pub first_year: i32,
    pub last_year: i32,
    /// Team sizes are uniform on this inclusive range.
    pub team_size_min: usize,
    pub team_size_max: usize,
    /// Chance that a member has no prior tie to any teammate.
    pub isolate_prob: f64,
    /// Chance of each optional split when cutting the connected members
    /// into components of two or more.
    pub split_prob: f64,
    /// Target mean component count; overrides `split_prob` when set.
    pub mean_cc: Option<f64>,
    /// Prior-collaboration density: probability of each within-component
    /// pair beyond the spanning tree.
    pub edge_prob: f64,
    pub refs_per_paper: usize,
    pub citers_per_paper: usize,
    /// Empty means all nineteen.
    pub disciplines: Vec<Discipline>,

    /// Outcome slope on standardized SD; this is also the direct effect in
    /// the mediation path.
    pub beta_sd: f64,
    /// Slope on SD x log team size.
    pub beta_interaction: f64,
    pub beta_team_size: f64,
    /// Shift for papers in the top SD quartile.
    pub treatment_effect: f64,
    /// SD to mediator slope, in mediator sd units.
    pub a_path: f64,
    /// Mediator to outcome slope.
    pub b_path: f64,
    /// Outcome slope on the last author's standardized institution h-index.
    pub h_effect: f64,
    /// Correlation between standardized SD and the h-index draw.
    pub confounding: f64,

    /// CD = cd_scale * latent outcome, before rounding to citer counts.
    pub cd_scale: f64,
    /// DI = di_base + di_scale * mediator, before rounding to reference counts.
    pub di_base: f64,
    pub di_scale: f64,

    pub review_fraction: f64,
    pub traceable_fraction: f64,
    pub nsf_share: f64,
    /// NSF papers from this year on get the shifts below.
    pub shock_year: Option<i32>,
    /// Added to the expected component count of shocked papers.
    pub shock_cc_shift: f64,
    /// Added to the latent outcome of shocked papers.
    pub shock_cd: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            seed: None,
            n_papers: 1000,
            first_year: 2000,
            last_year: 2015,
            team_size_min: 3,
            team_size_max: 10,
            isolate_prob: 0.15,
            split_prob: 0.4,
            mean_cc: None,
            edge_prob: 0.3,
            refs_per_paper: 20,
            citers_per_paper: 25,
            disciplines: Vec::new(),
            beta_sd: 0.0,
            beta_interaction: 0.0,
            beta_team_size: 0.0,
            treatment_effect: 0.0,
            a_path: 0.0,
            b_path: 0.0,
            h_effect: 0.8,
            confounding: 0.0,
            cd_scale: 0.15,
            di_base: 0.7,
            di_scale: 0.04,
            review_fraction: 0.0,
            traceable_fraction: 1.0,
            nsf_share: 0.5,
            shock_year: None,
            shock_cc_shift: 0.0,
            shock_cd: 0.0,
        }
    }
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(SynthError::Config(msg()))
    }
}

fn probability(name: &str, v: f64) -> Result<()> {
    check((0.0..=1.0).contains(&v), || format!("{name} = {v} must lie in [0, 1]"))
}

impl SynthConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| SynthError::Config(e.to_string()))
    }

    pub fn seed(&self) -> Result<u64> {
        self.seed.ok_or_else(|| SynthError::Config("seed is required".into()))
    }

    pub fn disciplines(&self) -> Vec<Discipline> {
        if self.disciplines.is_empty() {
            Discipline::ALL.to_vec()
        } else {
            self.disciplines.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.seed()?;
        check(self.first_year <= self.last_year, || "first_year is after last_year".into())?;
        check(self.first_year - CAREER_AGE_RANGE.1 >= YEAR_BOUNDS.0, || {
            format!("first_year must be at least {}", YEAR_BOUNDS.0 + CAREER_AGE_RANGE.1)
        })?;
        check(self.last_year + 5 <= YEAR_BOUNDS.1, || {
            format!("last_year must be at most {} to leave a citation window", YEAR_BOUNDS.1 - 5)
        })?;
        check(self.team_size_min >= 2 && self.team_size_min <= self.team_size_max, || {
            "team sizes need 2 <= team_size_min <= team_size_max".into()
        })?;
        check(self.team_size_max <= 60, || "team_size_max is capped at 60".into())?;
        for (name, v) in [
            ("isolate_prob", self.isolate_prob),
            ("split_prob", self.split_prob),
            ("edge_prob", self.edge_prob),
            ("review_fraction", self.review_fraction),
            ("traceable_fraction", self.traceable_fraction),
            ("nsf_share", self.nsf_share),
        ] {
            probability(name, v)?;
        }
        check(self.confounding.abs() <= 1.0, || "confounding must lie in [-1, 1]".into())?;
        check(self.refs_per_paper >= 1 && self.refs_per_paper <= 40, || {
            "refs_per_paper must lie in 1..=40".into()
        })?;
        check(self.citers_per_paper >= 1, || "citers_per_paper must be positive".into())?;
        check(self.cd_scale > 0.0 && self.cd_scale <= 1.0, || "cd_scale must lie in (0, 1]".into())?;
        check(self.di_scale >= 0.0, || "di_scale must be non-negative".into())?;
        let planted = [
            self.beta_sd,
            self.beta_interaction,
            self.beta_team_size,
            self.treatment_effect,
            self.a_path,
            self.b_path,
            self.h_effect,
            self.di_base,
            self.di_scale,
            self.shock_cc_shift,
            self.shock_cd,
        ];
        check(planted.iter().all(|v| v.is_finite()), || "planted coefficients must be finite".into())?;
        if let Some(m) = self.mean_cc {
            check(m.is_finite(), || "mean_cc must be finite".into())?;
        }
        Ok(())
    }
}
