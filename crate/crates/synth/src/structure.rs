//! Component layout of a team's prior network.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::Serialize;

use crate::error::{Result, SynthError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Layout {
    /// Member positions per component; singletons first.
    pub components: Vec<Vec<usize>>,
    pub singletons: usize,
}

impl Layout {
    pub fn cc(&self) -> usize {
        self.components.len()
    }
}

fn binomial<R: Rng>(rng: &mut R, n: usize, p: f64) -> usize {
    if n == 0 || p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return n;
    }
    Binomial::new(n as u64, p).expect("valid binomial").sample(rng) as usize
}

/// Isolated members after the draw: a lone connected member joins them.
fn adjust_singletons(n: usize, s: usize) -> usize {
    if n - s == 1 {
        n
    } else {
        s
    }
}

/// Each member is isolated with probability `isolate_prob`; the rest form
/// `1 + Binomial(floor(r/2) - 1, split_prob)` components of two or more.
pub fn sample_layout<R: Rng>(rng: &mut R, n: usize, isolate_prob: f64, split_prob: f64) -> Layout {
    let s = adjust_singletons(n, binomial(rng, n, isolate_prob));
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut components: Vec<Vec<usize>> = order[..s].iter().map(|&m| vec![m]).collect();
    let rest = &order[s..];
    let r = rest.len();
    if r >= 2 {
        let k = 1 + binomial(rng, r / 2 - 1, split_prob);
        let mut sizes = vec![2usize; k];
        for _ in 0..r - 2 * k {
            sizes[rng.random_range(0..k)] += 1;
        }
        let mut at = 0;
        for size in sizes {
            components.push(rest[at..at + size].to_vec());
            at += size;
        }
    }
    Layout {
        components,
        singletons: s,
    }
}

fn binomial_pmf(n: usize, p: f64) -> Vec<f64> {
    let mut pmf = vec![0.0; n + 1];
    let mut c = 1.0f64;
    for (k, slot) in pmf.iter_mut().enumerate() {
        if k > 0 {
            c = c * (n - k + 1) as f64 / k as f64;
        }
        *slot = c * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32);
    }
    pmf
}

/// E[cc] = intercept + slope * split_prob over uniform team sizes.
pub fn cc_expectation(size_min: usize, size_max: usize, isolate_prob: f64) -> (f64, f64) {
    let sizes = (size_max - size_min + 1) as f64;
    let (mut a, mut b) = (0.0, 0.0);
    for n in size_min..=size_max {
        for (s, p) in binomial_pmf(n, isolate_prob).into_iter().enumerate() {
            let s = adjust_singletons(n, s);
            let r = n - s;
            a += p / sizes * (s as f64 + if r >= 2 { 1.0 } else { 0.0 });
            if r >= 2 {
                b += p / sizes * (r / 2 - 1) as f64;
            }
        }
    }
    (a, b)
}

/// The split probability giving expected component count `mean_cc`.
pub fn split_prob_for(mean_cc: f64, size_min: usize, size_max: usize, isolate_prob: f64) -> Result<f64> {
    let (a, b) = cc_expectation(size_min, size_max, isolate_prob);
    if b <= 0.0 {
        return Err(SynthError::Infeasible(format!(
            "mean component count is fixed at {a:.4} for these team sizes"
        )));
    }
    let q = (mean_cc - a) / b;
    if !(0.0..=1.0).contains(&q) {
        return Err(SynthError::Infeasible(format!(
            "mean component count {mean_cc} is outside the reachable [{a:.4}, {:.4}]",
            a + b
        )));
    }
    Ok(q)
}
