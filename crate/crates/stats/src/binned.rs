//! Equal-count binning of (x, y) pairs followed by a straight-line fit of the
//! bin means.

use serde::Serialize;

use crate::describe::mean;
use crate::error::{Result, StatsError};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bin {
    pub count: usize,
    pub mean_x: f64,
    pub mean_y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinnedFit {
    pub requested_bins: usize,
    pub bins: Vec<Bin>,
    pub intercept: f64,
    pub slope: f64,
    /// Goodness of fit on the bin means, not on the raw points.
    pub r_squared: f64,
}

pub fn binned_means_fit(x: &[f64], y: &[f64], n_bins: usize) -> Result<BinnedFit> {
    if x.len() != y.len() {
        return Err(StatsError::InvalidInput("x and y differ in length".into()));
    }
    let n = x.len();
    if n_bins < 2 || n < n_bins {
        return Err(StatsError::InvalidInput(format!(
            "need n >= bins >= 2, got n = {n}, bins = {n_bins}"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let sx: Vec<f64> = order.iter().map(|&i| x[i]).collect();

    // Cut points at k*n/bins, pushed forward so that no tie run is split.
    let mut cuts = Vec::with_capacity(n_bins + 1);
    cuts.push(0);
    for k in 1..n_bins {
        let mut c = k * n / n_bins;
        while c < n && c > 0 && sx[c - 1] == sx[c] {
            c += 1;
        }
        if c < n && c > *cuts.last().unwrap() {
            cuts.push(c);
        }
    }
    cuts.push(n);

    let bins: Vec<Bin> = cuts
        .windows(2)
        .map(|w| {
            let idx = &order[w[0]..w[1]];
            let bx: Vec<f64> = idx.iter().map(|&i| x[i]).collect();
            let by: Vec<f64> = idx.iter().map(|&i| y[i]).collect();
            Bin {
                count: idx.len(),
                mean_x: mean(&bx),
                mean_y: mean(&by),
            }
        })
        .collect();
    if bins.len() < 2 {
        return Err(StatsError::ZeroVariance(
            "x (all values tied into one bin)".into(),
        ));
    }
    let mx = bins.iter().map(|b| b.mean_x).sum::<f64>() / bins.len() as f64;
    let my = bins.iter().map(|b| b.mean_y).sum::<f64>() / bins.len() as f64;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for b in &bins {
        sxx += (b.mean_x - mx) * (b.mean_x - mx);
        sxy += (b.mean_x - mx) * (b.mean_y - my);
        syy += (b.mean_y - my) * (b.mean_y - my);
    }
    let slope = sxy / sxx;
    let r_squared = if syy > 0.0 {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    } else {
        0.0
    };
    Ok(BinnedFit {
        requested_bins: n_bins,
        bins,
        intercept: my - slope * mx,
        slope,
        r_squared,
    })
}
