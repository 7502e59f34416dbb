//! Greedy one-to-one nearest-neighbour matching on the propensity score.

use std::collections::BTreeSet;

use ordered_float::OrderedFloat;
use serde::Serialize;

use crate::error::{CausalError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pair {
    /// Positions in the treated and control slices.
    pub treated: usize,
    pub control: usize,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Matching {
    pub pairs: Vec<Pair>,
    /// Treated units left without a control, pool exhausted or caliper.
    pub unmatched_treated: Vec<usize>,
    pub discarded_by_caliper: usize,
}

pub fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

/// Treated units are taken in descending score order (ties by position). Each
/// takes the closest unused control; on equal distance the lower-score
/// control wins, then the lower position. With a caliper, a pair whose logit
/// distance exceeds it is dropped and its control stays in the pool.
pub fn nn_match(treated: &[f64], controls: &[f64], caliper: Option<f64>) -> Result<Matching> {
    if controls.is_empty() {
        return Err(CausalError::EmptyControls);
    }
    let mut pool: BTreeSet<(OrderedFloat<f64>, usize)> =
        controls.iter().enumerate().map(|(i, &s)| (OrderedFloat(s), i)).collect();
    let mut order: Vec<usize> = (0..treated.len()).collect();
    order.sort_by(|&a, &b| treated[b].total_cmp(&treated[a]).then(a.cmp(&b)));

    let mut out = Matching {
        pairs: Vec::new(),
        unmatched_treated: Vec::new(),
        discarded_by_caliper: 0,
    };
    for t in order {
        let s = treated[t];
        let key = (OrderedFloat(s), 0usize);
        let above = pool.range(key..).next().copied();
        // lowest position among the controls sharing the predecessor's score
        let below = pool
            .range(..key)
            .next_back()
            .and_then(|&(score, _)| pool.range((score, 0)..).next().copied());
        let pick = match (below, above) {
            (None, None) => None,
            (Some(b), None) => Some(b),
            (None, Some(a)) => Some(a),
            (Some(b), Some(a)) => {
                if s - b.0 .0 <= a.0 .0 - s {
                    Some(b)
                } else {
                    Some(a)
                }
            }
        };
        let Some(c) = pick else {
            out.unmatched_treated.push(t);
            continue;
        };
        if let Some(width) = caliper {
            if (logit(s) - logit(c.0 .0)).abs() > width {
                out.discarded_by_caliper += 1;
                out.unmatched_treated.push(t);
                continue;
            }
        }
        pool.remove(&c);
        out.pairs.push(Pair {
            treated: t,
            control: c.1,
            gap: (s - c.0 .0).abs(),
        });
    }
    out.unmatched_treated.sort_unstable();
    Ok(out)
}
