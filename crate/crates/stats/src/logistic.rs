//! Binary logistic regression by Newton-Raphson (IRLS).

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Result, StatsError};

pub const TOLERANCE: f64 = 1e-8;
pub const MAX_ITERATIONS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogisticFit {
    pub coefficients: Vec<f64>,
    pub log_likelihood: f64,
    pub iterations: usize,
    /// False on separation, a singular Hessian or the iteration cap. The
    /// coefficients are then the last iterate.
    pub converged: bool,
}

impl LogisticFit {
    pub fn linear_predictor(&self, row: &[f64]) -> f64 {
        row.iter().zip(&self.coefficients).map(|(a, b)| a * b).sum()
    }

    pub fn predict(&self, row: &[f64]) -> f64 {
        sigmoid(self.linear_predictor(row))
    }
}

pub fn sigmoid(eta: f64) -> f64 {
    if eta >= 0.0 {
        1.0 / (1.0 + (-eta).exp())
    } else {
        let e = eta.exp();
        e / (1.0 + e)
    }
}

fn log_likelihood(x: &DMatrix<f64>, y: &[f64], beta: &DVector<f64>) -> f64 {
    let eta = x * beta;
    eta.iter()
        .zip(y)
        .map(|(&e, &yi)| {
            // log(1 + exp(e)) computed without overflow
            let softplus = if e > 0.0 { e + (-e).exp().ln_1p() } else { e.exp().ln_1p() };
            yi * e - softplus
        })
        .sum()
}

/// `x` must already contain an intercept column if one is wanted; `y` holds 0/1.
pub fn logistic_fit(x: &DMatrix<f64>, y: &[f64]) -> Result<LogisticFit> {
    let (n, k) = x.shape();
    if n != y.len() {
        return Err(StatsError::LengthMismatch {
            name: "y".into(),
            expected: n,
            got: y.len(),
        });
    }
    if n <= k {
        return Err(StatsError::TooFewObservations { needed: k + 1, got: n });
    }
    if y.iter().any(|&v| v != 0.0 && v != 1.0) {
        return Err(StatsError::InvalidInput("logistic outcome must be 0 or 1".into()));
    }
    let mut beta = DVector::zeros(k);
    let mut ll = log_likelihood(x, y, &beta);
    let mut converged = false;
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let eta = x * &beta;
        let p: Vec<f64> = eta.iter().map(|&e| sigmoid(e)).collect();
        let resid = DVector::from_iterator(n, y.iter().zip(&p).map(|(yi, pi)| yi - pi));
        let grad = x.tr_mul(&resid);
        let mut xw = x.clone();
        for (i, pi) in p.iter().enumerate() {
            let w = (pi * (1.0 - pi)).max(1e-12);
            xw.row_mut(i).scale_mut(w);
        }
        let hessian = x.tr_mul(&xw);
        let Some(chol) = hessian.cholesky() else {
            break;
        };
        let delta = chol.solve(&grad);
        let mut step = 1.0;
        let mut candidate = &beta + &delta;
        let mut cand_ll = log_likelihood(x, y, &candidate);
        let mut halvings = 0;
        while !(cand_ll >= ll - 1e-12) && halvings < 30 {
            step *= 0.5;
            candidate = &beta + &delta * step;
            cand_ll = log_likelihood(x, y, &candidate);
            halvings += 1;
        }
        let change = (&delta * step).amax();
        beta = candidate;
        ll = cand_ll;
        if change < TOLERANCE {
            converged = true;
            break;
        }
    }
    if converged && beta.iter().any(|b| b.abs() > 30.0) {
        // fitted probabilities pinned at 0 or 1: quasi-complete separation
        converged = false;
    }
    Ok(LogisticFit {
        coefficients: beta.iter().copied().collect(),
        log_likelihood: ll,
        iterations,
        converged,
    })
}
