//! Propensity scores from a logistic model of treatment on covariates.

use serde::Serialize;
use teamdiv_stats::{build_design, logistic_fit, Frame, ModelSpec};

use crate::error::{CausalError, Result};

pub const TREATED_COLUMN: &str = "__treated";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropensityScores {
    /// One score per frame row; missing where a covariate is missing.
    pub scores: Vec<Option<f64>>,
    pub converged: bool,
    pub iterations: usize,
    pub n_used: usize,
}

/// Fits P(treated) on `covariates` plus one dummy set per entry of
/// `fixed_effects` (categorical frame columns). Columns are standardized
/// before fitting, which leaves the fitted probabilities unchanged.
pub fn propensity_scores(
    frame: &Frame,
    treated: &[bool],
    covariates: &[String],
    fixed_effects: &[String],
) -> Result<PropensityScores> {
    if treated.len() != frame.len() {
        return Err(CausalError::InvalidInput(format!(
            "{} treatment flags for {} rows",
            treated.len(),
            frame.len()
        )));
    }
    let mut frame = frame.clone();
    frame.insert_dense(
        TREATED_COLUMN,
        treated.iter().map(|&t| if t { 1.0 } else { 0.0 }).collect(),
    )?;
    let names: Vec<&str> = covariates.iter().map(String::as_str).collect();
    let mut spec = ModelSpec::new(TREATED_COLUMN, &names);
    for fe in fixed_effects {
        spec = spec.fixed_effect(fe);
    }
    let design = build_design(&frame, &spec)?;
    let mut x = design.x.clone();
    for j in 0..x.ncols() {
        let col = x.column(j);
        let n = col.len() as f64;
        let m = col.sum() / n;
        let sd = (col.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n).sqrt();
        if sd > 0.0 {
            for v in x.column_mut(j).iter_mut() {
                *v = (*v - m) / sd;
            }
        }
    }
    let y: Vec<f64> = design.y.iter().copied().collect();
    let fit = logistic_fit(&x, &y)?;
    let mut scores = vec![None; frame.len()];
    for (r, &row) in design.rows.iter().enumerate() {
        let eta: f64 = x.row(r).iter().zip(&fit.coefficients).map(|(a, b)| a * b).sum();
        scores[row] = Some(teamdiv_stats::sigmoid(eta));
    }
    Ok(PropensityScores {
        scores,
        converged: fit.converged,
        iterations: fit.iterations,
        n_used: design.rows.len(),
    })
}
