use serde::Serialize;

use crate::describe::{average_ranks, pearson};
use crate::dist::t_two_sided_p;
use crate::error::{Result, StatsError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Spearman {
    /// `None` when either input is constant.
    pub rho: Option<f64>,
    pub p_value: Option<f64>,
    pub n: usize,
}

/// Spearman rank correlation: Pearson correlation of tie-averaged ranks, with
/// a t approximation (n - 2 df) for the p-value.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<Spearman> {
    if x.len() != y.len() {
        return Err(StatsError::InvalidInput(format!(
            "spearman inputs differ in length ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    let n = x.len();
    if n < 3 {
        return Err(StatsError::TooFewObservations { needed: 2, got: n });
    }
    let (rx, _) = average_ranks(x);
    let (ry, _) = average_ranks(y);
    let rho = pearson(&rx, &ry);
    let p_value = rho.map(|r| {
        if r.abs() >= 1.0 {
            0.0
        } else {
            let df = (n - 2) as f64;
            t_two_sided_p(r * (df / (1.0 - r * r)).sqrt(), df)
        }
    });
    Ok(Spearman { rho, p_value, n })
}
