//! Gaussian kernel density estimates.

use serde::Serialize;

use crate::describe::{quantile_sorted, sample_sd};
use crate::error::{Result, StatsError};

/// Silverman's rule: 0.9 * min(sd, IQR / 1.34) * n^(-1/5). Falls back to the
/// sd when the IQR is zero.
pub fn silverman_bandwidth(values: &[f64]) -> Result<f64> {
    if values.len() < 2 {
        return Err(StatsError::TooFewObservations {
            needed: 2,
            got: values.len(),
        });
    }
    let sd = sample_sd(values);
    if !(sd > 0.0) {
        return Err(StatsError::ZeroVariance("kde sample".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let iqr = quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    Ok(0.9 * spread * (values.len() as f64).powf(-0.2))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Density {
    pub bandwidth: f64,
    pub x: Vec<f64>,
    pub density: Vec<f64>,
}

pub fn gaussian_kde(values: &[f64], grid: &[f64], bandwidth: Option<f64>) -> Result<Density> {
    let h = match bandwidth {
        Some(h) if h > 0.0 => h,
        Some(h) => return Err(StatsError::InvalidInput(format!("bandwidth {h} must be positive"))),
        None => silverman_bandwidth(values)?,
    };
    let norm = 1.0 / (values.len() as f64 * h * (2.0 * std::f64::consts::PI).sqrt());
    let density = grid
        .iter()
        .map(|&g| {
            values
                .iter()
                .map(|&v| {
                    let u = (g - v) / h;
                    (-0.5 * u * u).exp()
                })
                .sum::<f64>()
                * norm
        })
        .collect();
    Ok(Density {
        bandwidth: h,
        x: grid.to_vec(),
        density,
    })
}

/// Evenly spaced grid covering the data range padded by three bandwidths.
pub fn default_grid(values: &[f64], bandwidth: f64, points: usize) -> Vec<f64> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min) - 3.0 * bandwidth;
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 3.0 * bandwidth;
    let points = points.max(2);
    let step = (hi - lo) / (points - 1) as f64;
    (0..points).map(|i| lo + step * i as f64).collect()
}
