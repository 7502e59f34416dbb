//! Two-sample tests: Welch's t-test and the Mann-Whitney U test.

use serde::Serialize;

use crate::describe::{average_ranks, mean, sample_variance};
use crate::dist::{normal_two_sided_p, t_two_sided_p};
use crate::error::{Result, StatsError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TTest {
    pub mean_a: f64,
    pub mean_b: f64,
    /// Missing when both samples have zero variance.
    pub t: Option<f64>,
    pub df: Option<f64>,
    pub p_value: Option<f64>,
}

/// Welch's unequal-variance t-test with Welch-Satterthwaite degrees of freedom.
pub fn t_test_independent(a: &[f64], b: &[f64]) -> Result<TTest> {
    if a.len() < 2 || b.len() < 2 {
        return Err(StatsError::TooFewObservations {
            needed: 1,
            got: a.len().min(b.len()),
        });
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (ma, mb) = (mean(a), mean(b));
    let (va, vb) = (sample_variance(a) / na, sample_variance(b) / nb);
    let se2 = va + vb;
    if se2 == 0.0 {
        return Ok(TTest {
            mean_a: ma,
            mean_b: mb,
            t: None,
            df: None,
            p_value: None,
        });
    }
    let t = (ma - mb) / se2.sqrt();
    let df = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    Ok(TTest {
        mean_a: ma,
        mean_b: mb,
        t: Some(t),
        df: Some(df),
        p_value: Some(t_two_sided_p(t, df)),
    })
}

/// One-sample t-test of H0: mean = 0.
pub fn t_test_one_sample(values: &[f64]) -> Result<TTest> {
    if values.len() < 2 {
        return Err(StatsError::TooFewObservations {
            needed: 1,
            got: values.len(),
        });
    }
    let n = values.len() as f64;
    let m = mean(values);
    let se2 = sample_variance(values) / n;
    let (t, df, p) = if se2 == 0.0 {
        (None, None, None)
    } else {
        let t = m / se2.sqrt();
        (Some(t), Some(n - 1.0), Some(t_two_sided_p(t, n - 1.0)))
    };
    Ok(TTest {
        mean_a: m,
        mean_b: 0.0,
        t,
        df,
        p_value: p,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MannWhitney {
    /// U counted from the first sample's side: pairs (a, b) with a > b,
    /// ties counting one half.
    pub u_a: f64,
    pub u_b: f64,
    pub z: f64,
    /// Normal approximation with tie correction and continuity correction.
    pub p_value: f64,
}

pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> Result<MannWhitney> {
    if a.is_empty() || b.is_empty() {
        return Err(StatsError::TooFewObservations { needed: 0, got: 0 });
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let (ranks, ties) = average_ranks(&pooled);
    let rank_sum_a: f64 = ranks[..a.len()].iter().sum();
    let u_a = rank_sum_a - na * (na + 1.0) / 2.0;
    let u_b = na * nb - u_a;
    let n = na + nb;
    let tie_term: f64 = ties.iter().map(|&t| (t * t * t - t) as f64).sum();
    let var = na * nb / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    let mu = na * nb / 2.0;
    let (z, p_value) = if var <= 0.0 {
        (0.0, 1.0)
    } else {
        let dev = ((u_a - mu).abs() - 0.5).max(0.0);
        let z = dev / var.sqrt() * (u_a - mu).signum();
        (z, normal_two_sided_p(z))
    };
    Ok(MannWhitney {
        u_a,
        u_b,
        z,
        p_value,
    })
}
