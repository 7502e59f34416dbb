//! Product-of-coefficients mediation with nested linear models.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use teamdiv_stats::{build_design, fit_model, weighted_coefficients, CovarianceKind, Frame, ModelSpec};

use crate::att::percentile_interval;
use crate::error::{CausalError, Result};

pub const PROPORTION_GUARD: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MediationConfig {
    pub exposure: String,
    pub mediator: String,
    pub outcome: String,
    pub controls: Vec<String>,
    pub fixed_effects: Vec<String>,
    pub n_bootstrap: usize,
    pub seed: u64,
}

impl Default for MediationConfig {
    fn default() -> Self {
        Self {
            exposure: "sd_std".into(),
            mediator: "di".into(),
            outcome: "cd_norm".into(),
            controls: [
                "title_word_count",
                "flesch",
                "promo_pct",
                "log_team_size",
                "career_age",
                "career_age_sq",
                "inst_h_index",
                "log_pub_count",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect(),
            fixed_effects: vec!["year".into()],
            n_bootstrap: 1000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MediationResult {
    pub n: usize,
    /// Exposure to mediator.
    pub a: PathEstimate,
    /// Mediator to outcome, adjusting for exposure.
    pub b: PathEstimate,
    /// Total effect of exposure on outcome.
    pub total: PathEstimate,
    /// Exposure to outcome, adjusting for the mediator.
    pub direct: PathEstimate,
    pub indirect: f64,
    pub indirect_ci: (f64, f64),
    pub indirect_p: f64,
    /// Missing when the total effect is within the guard of zero.
    pub proportion_mediated: Option<f64>,
    pub n_bootstrap: usize,
    /// Replicates with a solvable fit.
    pub effective_bootstrap: usize,
    /// total - (direct + a b); zero up to rounding.
    pub identity_gap: f64,
}

fn path(res: &teamdiv_stats::RegressionResult, name: &str) -> Result<PathEstimate> {
    let missing = || CausalError::InvalidInput(format!("term {name} was not estimated"));
    Ok(PathEstimate {
        estimate: res.coefficient(name).ok_or_else(missing)?,
        std_error: res.std_error(name).ok_or_else(missing)?,
        p_value: res.p_value(name).ok_or_else(missing)?,
    })
}

fn spec(outcome: &str, predictors: &[&str], fes: &[String]) -> ModelSpec {
    fes.iter().fold(ModelSpec::new(outcome, predictors), |s, fe| s.fixed_effect(fe))
}

pub fn mediation_analysis(frame: &Frame, cfg: &MediationConfig) -> Result<MediationResult> {
    let (x, m, y) = (cfg.exposure.as_str(), cfg.mediator.as_str(), cfg.outcome.as_str());
    let controls: Vec<&str> = cfg.controls.iter().map(String::as_str).collect();

    let mut all = vec![x, m];
    all.extend(&controls);
    let full = build_design(frame, &spec(y, &all, &cfg.fixed_effects))?;
    let data = frame.select_rows(&full.rows);

    let mut with_x = vec![x];
    with_x.extend(&controls);
    let mut with_xm = vec![x, m];
    with_xm.extend(&controls);
    let kind = CovarianceKind::Classical;
    let fit_a = fit_model(&data, &spec(m, &with_x, &cfg.fixed_effects), kind)?;
    let fit_b = fit_model(&data, &spec(y, &with_xm, &cfg.fixed_effects), kind)?;
    let fit_c = fit_model(&data, &spec(y, &with_x, &cfg.fixed_effects), kind)?;
    let (a, b) = (path(&fit_a, x)?, path(&fit_b, m)?);
    let (direct, total) = (path(&fit_b, x)?, path(&fit_c, x)?);
    let indirect = a.estimate * b.estimate;

    let design_a = build_design(&data, &spec(m, &with_x, &cfg.fixed_effects))?;
    let design_b = build_design(&data, &spec(y, &with_xm, &cfg.fixed_effects))?;
    let ia = design_a.term_names().iter().position(|t| t == x).unwrap();
    let ib = design_b.term_names().iter().position(|t| t == m).unwrap();
    let n = data.len();
    let draws: Vec<Option<f64>> = (0..cfg.n_bootstrap)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(r as u64);
            let mut w = vec![0.0; n];
            for _ in 0..n {
                w[rng.random_range(0..n)] += 1.0;
            }
            let ca: DVector<f64> = weighted_coefficients(&design_a.x, &design_a.y, &w)?;
            let cb: DVector<f64> = weighted_coefficients(&design_b.x, &design_b.y, &w)?;
            Some(ca[ia] * cb[ib])
        })
        .collect();
    let draws: Vec<f64> = draws.into_iter().flatten().collect();
    let effective = draws.len();
    let (indirect_ci, indirect_p) = if effective == 0 {
        ((indirect, indirect), 1.0)
    } else {
        let below = draws.iter().filter(|&&d| d <= 0.0).count();
        let above = draws.iter().filter(|&&d| d >= 0.0).count();
        let p = (2 * below.min(above) + 1) as f64 / (effective + 1) as f64;
        (percentile_interval(&draws), p.min(1.0))
    };

    Ok(MediationResult {
        n,
        identity_gap: total.estimate - (direct.estimate + indirect),
        proportion_mediated: (total.estimate.abs() >= PROPORTION_GUARD).then(|| indirect / total.estimate),
        a,
        b,
        total,
        direct,
        indirect,
        indirect_ci,
        indirect_p,
        n_bootstrap: cfg.n_bootstrap,
        effective_bootstrap: effective,
    })
}
