//! The matching pipeline: quantile treatment groups, propensity scores,
//! greedy matching, balance and ATT.

use serde::{Deserialize, Serialize};
use teamdiv_stats::describe::{mean, sample_sd};
use teamdiv_stats::Frame;

use crate::att::{att_estimate, Att};
use crate::balance::{smd, BalanceRow};
use crate::error::{CausalError, Result};
use crate::groups::quantile_groups;
use crate::matching::{logit, nn_match};
use crate::propensity::propensity_scores;

/// Covariates used when none are configured: content, author and team
/// controls. Edge density and clustering are left out.
pub const DEFAULT_COVARIATES: [&str; 9] = [
    "title_word_count",
    "flesch",
    "promo_pct",
    "log_team_size",
    "freshness",
    "career_age",
    "career_age_sq",
    "inst_h_index",
    "log_pub_count",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PsmConfig {
    /// Column whose quantiles define treatment.
    pub treatment: String,
    pub outcome: String,
    pub covariates: Vec<String>,
    /// Categorical columns entered as dummies in the propensity model.
    pub fixed_effects: Vec<String>,
    /// Caliper width as a multiple of the sd of logit scores; `None` disables it.
    pub caliper: Option<f64>,
    pub n_bootstrap: usize,
    pub seed: u64,
    pub balance_threshold: f64,
}

impl Default for PsmConfig {
    fn default() -> Self {
        Self {
            treatment: "sd_std".into(),
            outcome: "cd_norm".into(),
            covariates: DEFAULT_COVARIATES.iter().map(|s| s.to_string()).collect(),
            fixed_effects: vec!["year".into()],
            caliper: Some(0.2),
            n_bootstrap: 1000,
            seed: 0,
            balance_threshold: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchedPair {
    pub treated_id: String,
    pub control_id: String,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchReport {
    pub groups: usize,
    pub treated_group: usize,
    pub control_group: usize,
    pub n_treated: usize,
    pub n_control: usize,
    pub n_matched: usize,
    pub unmatched_treated: usize,
    pub discarded_by_caliper: usize,
    pub caliper_width: Option<f64>,
    pub propensity_converged: bool,
    pub split_tie_runs: usize,
    pub pairs: Vec<MatchedPair>,
    pub balance: Vec<BalanceRow>,
    pub balanced: bool,
    pub mean_outcome_treated: f64,
    pub mean_outcome_control: f64,
    pub att: Att,
}

fn column(frame: &Frame, name: &str, rows: &[usize]) -> Result<Vec<f64>> {
    let col = frame.numeric(name)?;
    Ok(rows.iter().filter_map(|&r| col[r]).collect())
}

/// Splits complete rows into `k` quantile groups of the treatment column and
/// matches group `treated_group` against `control_group`.
pub fn psm_between(
    frame: &Frame,
    ids: &[String],
    cfg: &PsmConfig,
    k: usize,
    treated_group: usize,
    control_group: usize,
) -> Result<MatchReport> {
    if ids.len() != frame.len() {
        return Err(CausalError::InvalidInput("one id per row is required".into()));
    }
    let mut needed: Vec<&str> = vec![cfg.treatment.as_str(), cfg.outcome.as_str()];
    needed.extend(cfg.covariates.iter().map(String::as_str));
    let (mut complete, _) = frame.complete_cases(&needed)?;
    for fe in &cfg.fixed_effects {
        let col = frame.categorical(fe)?;
        complete.retain(|&r| col[r].is_some());
    }
    let treat_col = frame.numeric(&cfg.treatment)?;
    let values: Vec<f64> = complete.iter().map(|&r| treat_col[r].unwrap()).collect();
    let sub_ids: Vec<&str> = complete.iter().map(|&r| ids[r].as_str()).collect();
    let groups = quantile_groups(&values, &sub_ids, k)?;

    let rows: Vec<usize> = complete
        .iter()
        .zip(&groups.labels)
        .filter(|(_, &g)| g == treated_group || g == control_group)
        .map(|(&r, _)| r)
        .collect();
    let treated_flag: Vec<bool> = complete
        .iter()
        .zip(&groups.labels)
        .filter(|(_, &g)| g == treated_group || g == control_group)
        .map(|(_, &g)| g == treated_group)
        .collect();
    let sub = frame.select_rows(&rows);
    let ps = propensity_scores(&sub, &treated_flag, &cfg.covariates, &cfg.fixed_effects)?;
    let scores: Vec<f64> = ps
        .scores
        .iter()
        .map(|s| s.ok_or_else(|| CausalError::InvalidInput("row without a propensity score".into())))
        .collect::<Result<_>>()?;

    let (mut t_idx, mut c_idx) = (Vec::new(), Vec::new());
    for (i, &t) in treated_flag.iter().enumerate() {
        if t { t_idx.push(i) } else { c_idx.push(i) }
    }
    let t_scores: Vec<f64> = t_idx.iter().map(|&i| scores[i]).collect();
    let c_scores: Vec<f64> = c_idx.iter().map(|&i| scores[i]).collect();
    let caliper_width = cfg.caliper.map(|m| {
        let logits: Vec<f64> = scores.iter().map(|&s| logit(s)).collect();
        m * sample_sd(&logits)
    });
    let matching = nn_match(&t_scores, &c_scores, caliper_width)?;
    if matching.pairs.is_empty() {
        return Err(CausalError::NoPairs);
    }

    let outcome = sub.numeric(&cfg.outcome)?;
    let mut diffs = Vec::with_capacity(matching.pairs.len());
    let mut pairs = Vec::with_capacity(matching.pairs.len());
    let (mut mt, mut mc) = (Vec::new(), Vec::new());
    for p in &matching.pairs {
        let (ti, ci) = (t_idx[p.treated], c_idx[p.control]);
        let (yt, yc) = (outcome[ti].unwrap(), outcome[ci].unwrap());
        diffs.push(yt - yc);
        mt.push(ti);
        mc.push(ci);
        pairs.push(MatchedPair {
            treated_id: ids[rows[ti]].clone(),
            control_id: ids[rows[ci]].clone(),
            gap: p.gap,
        });
    }

    let mut balance = Vec::with_capacity(cfg.covariates.len());
    for cov in &cfg.covariates {
        let after = smd(&column(&sub, cov, &mt)?, &column(&sub, cov, &mc)?);
        balance.push(BalanceRow {
            covariate: cov.clone(),
            smd_before: smd(&column(&sub, cov, &t_idx)?, &column(&sub, cov, &c_idx)?),
            smd_after: after,
            undefined_after: after.is_none(),
        });
    }
    let balanced = balance.iter().all(|b| b.balanced(cfg.balance_threshold));
    let att = att_estimate(&diffs, cfg.n_bootstrap, cfg.seed)?;
    Ok(MatchReport {
        groups: k,
        treated_group,
        control_group,
        n_treated: t_idx.len(),
        n_control: c_idx.len(),
        n_matched: pairs.len(),
        unmatched_treated: matching.unmatched_treated.len(),
        discarded_by_caliper: matching.discarded_by_caliper,
        caliper_width,
        propensity_converged: ps.converged,
        split_tie_runs: groups.split_tie_runs,
        pairs,
        balance,
        balanced,
        mean_outcome_treated: mean(&column(&sub, &cfg.outcome, &mt)?),
        mean_outcome_control: mean(&column(&sub, &cfg.outcome, &mc)?),
        att,
    })
}

/// Top quartile of the treatment column against the bottom quartile.
pub fn psm_quartile(frame: &Frame, ids: &[String], cfg: &PsmConfig) -> Result<MatchReport> {
    psm_between(frame, ids, cfg, 4, 4, 1)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecileContrast {
    pub label: String,
    pub report: MatchReport,
}

/// d1 matches decile 10 against decile 1, d2 decile 9 against 2, down to d5
/// (6 against 5).
pub fn psm_decile_sweep(frame: &Frame, ids: &[String], cfg: &PsmConfig) -> Result<Vec<DecileContrast>> {
    (1..=5)
        .map(|k| {
            Ok(DecileContrast {
                label: format!("d{k}"),
                report: psm_between(frame, ids, cfg, 10, 11 - k, k)?,
            })
        })
        .collect()
}
