//! The ground-truth record written next to a synthetic corpus.

use serde::Serialize;

use crate::config::SynthConfig;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Planted {
    pub beta_sd: f64,
    pub beta_interaction: f64,
    pub beta_team_size: f64,
    pub treatment_effect: f64,
    pub a_path: f64,
    pub b_path: f64,
    /// Same as `beta_sd`.
    pub direct: f64,
    pub indirect: f64,
    pub total: f64,
    /// Slopes as they appear with raw DI as the mediator.
    pub a_path_on_di: f64,
    pub b_path_on_di: f64,
    /// Outcome slope per h-index point.
    pub h_effect_per_point: f64,
    pub confounding: f64,
    pub shock_cd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Derived {
    pub split_prob: f64,
    pub split_prob_shocked: f64,
    pub expected_mean_cc: f64,
    pub expected_mean_cc_shocked: f64,
    /// Sample mean and sd of SD used for standardization.
    pub sd_mean: f64,
    pub sd_sd: f64,
    pub systematic_variance: f64,
    /// Variance added by rounding CD to citer counts, in outcome units.
    pub rounding_variance: f64,
    pub noise_sd: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub records: usize,
    pub research_articles: usize,
    pub reviews: usize,
    pub focal: usize,
    pub traceable_focal: usize,
    /// Focal research articles with traceable history: the analysis sample.
    pub sample: usize,
    pub history: usize,
    pub career: usize,
    pub library: usize,
    pub citers: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct EdgeTruth {
    pub edge_prob: f64,
    /// Within-component pairs outside the spanning trees.
    pub eligible_pairs: usize,
    pub extra_edges: usize,
    pub tree_edges: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PaperTruth {
    pub id: String,
    pub year: i32,
    pub discipline: String,
    pub team_size: usize,
    pub nsf_funded: bool,
    pub review: bool,
    pub traceable: bool,
    pub in_sample: bool,
    pub shocked: bool,
    pub cc: usize,
    pub singletons: usize,
    pub component_sizes: Vec<usize>,
    pub edges: usize,
    pub sd: f64,
    pub sd_std: f64,
    pub top_quartile: bool,
    pub career_age: i32,
    pub h_index: u32,
    pub mediator: f64,
    pub di: f64,
    pub latent: f64,
    pub cd: f64,
    pub citers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroundTruth {
    pub config: SynthConfig,
    pub planted: Planted,
    pub derived: Derived,
    pub counts: Counts,
    pub edges: EdgeTruth,
    pub papers: Vec<PaperTruth>,
}
