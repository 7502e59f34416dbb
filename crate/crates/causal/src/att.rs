//! Average treatment effect on the treated with a pair bootstrap.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use teamdiv_stats::describe::{mean, quantile_sorted};
use teamdiv_stats::t_test_one_sample;

use crate::error::{CausalError, Result};

pub const MIN_PAIRS_FOR_CI: usize = 30;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Att {
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// One-sample t-test on the pair differences; missing when they are all equal.
    pub p_value: Option<f64>,
    pub n_pairs: usize,
    pub n_bootstrap: usize,
    pub warnings: Vec<String>,
}

/// Replicate `b` draws from ChaCha8 seeded with `seed` on stream `b`, so the
/// result does not depend on how replicates are spread over threads.
pub fn bootstrap_means(values: &[f64], n_bootstrap: usize, seed: u64) -> Vec<f64> {
    let n = values.len();
    (0..n_bootstrap)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let mut sum = 0.0;
            for _ in 0..n {
                sum += values[rng.random_range(0..n)];
            }
            sum / n as f64
        })
        .collect()
}

/// 2.5% and 97.5% percentiles of `draws`.
pub fn percentile_interval(draws: &[f64]) -> (f64, f64) {
    let mut sorted = draws.to_vec();
    sorted.sort_by(f64::total_cmp);
    (quantile_sorted(&sorted, 0.025), quantile_sorted(&sorted, 0.975))
}

/// `diffs` holds outcome_T - outcome_C per matched pair.
pub fn att_estimate(diffs: &[f64], n_bootstrap: usize, seed: u64) -> Result<Att> {
    if diffs.is_empty() {
        return Err(CausalError::NoPairs);
    }
    if diffs.iter().any(|d| !d.is_finite()) {
        return Err(CausalError::InvalidInput("pair differences must be finite".into()));
    }
    let estimate = mean(diffs);
    let mut warnings = Vec::new();
    if diffs.len() < MIN_PAIRS_FOR_CI {
        warnings.push(format!(
            "{} pairs; the bootstrap interval is unreliable below {MIN_PAIRS_FOR_CI}",
            diffs.len()
        ));
    }
    let (lo, hi) = if n_bootstrap == 0 {
        (estimate, estimate)
    } else {
        percentile_interval(&bootstrap_means(diffs, n_bootstrap, seed))
    };
    let p_value = if diffs.len() >= 2 {
        t_test_one_sample(diffs)?.p_value
    } else {
        None
    };
    Ok(Att {
        estimate,
        ci_low: lo.min(estimate),
        ci_high: hi.max(estimate),
        p_value,
        n_pairs: diffs.len(),
        n_bootstrap,
        warnings,
    })
}
