//! Equal-count quantile groups.

use serde::Serialize;

use crate::error::{CausalError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuantileGroups {
    /// Group of each input, 1 (lowest) ..= k.
    pub labels: Vec<usize>,
    pub k: usize,
    /// Runs of tied values that were split across a group boundary by the
    /// id tie-break.
    pub split_tie_runs: usize,
    /// Largest number of tied values in one run.
    pub largest_tie_run: usize,
}

impl QuantileGroups {
    pub fn members(&self, group: usize) -> Vec<usize> {
        (0..self.labels.len()).filter(|&i| self.labels[i] == group).collect()
    }
}

/// Sorts by (value, id) and cuts the order into `k` runs whose sizes differ by
/// at most one, so ties are split deterministically by id.
pub fn quantile_groups<K: Ord>(values: &[f64], ids: &[K], k: usize) -> Result<QuantileGroups> {
    let n = values.len();
    if ids.len() != n {
        return Err(CausalError::InvalidInput("one id per value is required".into()));
    }
    if k == 0 || n < k {
        return Err(CausalError::TooFewForGroups { needed: k.max(1), got: n });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(CausalError::InvalidInput("quantile values must be finite".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then_with(|| ids[a].cmp(&ids[b])));
    let mut labels = vec![0; n];
    for (pos, &i) in order.iter().enumerate() {
        labels[i] = pos * k / n + 1;
    }
    let (mut split, mut largest, mut start) = (0, 0, 0);
    while start < n {
        let mut end = start + 1;
        while end < n && values[order[end]] == values[order[start]] {
            end += 1;
        }
        largest = largest.max(end - start);
        if labels[order[start]] != labels[order[end - 1]] {
            split += 1;
        }
        start = end;
    }
    Ok(QuantileGroups {
        labels,
        k,
        split_tie_runs: split,
        largest_tie_run: largest,
    })
}
