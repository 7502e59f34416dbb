//! Standardized mean differences.

use serde::Serialize;
use teamdiv_stats::describe::{mean, sample_variance};

/// (mean_T - mean_C) / sqrt((var_T + var_C) / 2); missing when the pooled
/// sd is zero or a group has fewer than two values.
pub fn smd(treated: &[f64], control: &[f64]) -> Option<f64> {
    if treated.len() < 2 || control.len() < 2 {
        return None;
    }
    let pooled = ((sample_variance(treated) + sample_variance(control)) / 2.0).sqrt();
    (pooled > 0.0).then(|| (mean(treated) - mean(control)) / pooled)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BalanceRow {
    pub covariate: String,
    pub smd_before: Option<f64>,
    pub smd_after: Option<f64>,
    /// True when the pooled sd was zero after matching.
    pub undefined_after: bool,
}

impl BalanceRow {
    pub fn balanced(&self, threshold: f64) -> bool {
        self.smd_after.is_none_or(|s| s.abs() < threshold)
    }
}
