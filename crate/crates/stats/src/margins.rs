//! Adjusted predictions over a grid of one variable, optionally at several
//! levels of a moderator, with delta-method confidence intervals. Every other
//! term is held at its sample mean.

use serde::Serialize;

use crate::design::Term;
use crate::dist::Z_975;
use crate::error::{Result, StatsError};
use crate::ols::RegressionResult;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginPoint {
    pub moderator: Option<f64>,
    pub x: f64,
    pub prediction: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

fn mean_of(result: &RegressionResult, var: &str) -> Result<f64> {
    result
        .terms
        .iter()
        .position(|t| matches!(t, Term::Numeric(n) if n == var))
        .map(|j| result.term_means[j])
        .ok_or_else(|| StatsError::UnknownTerm(var.to_string()))
}

fn contrast(
    result: &RegressionResult,
    focal: &str,
    x: f64,
    moderator: Option<(&str, f64)>,
) -> Result<Vec<f64>> {
    let value = |var: &str| -> Result<f64> {
        if var == focal {
            Ok(x)
        } else if let Some((_, v)) = moderator.filter(|(m, _)| *m == var) {
            Ok(v)
        } else {
            mean_of(result, var)
        }
    };
    result
        .terms
        .iter()
        .enumerate()
        .map(|(j, t)| match t {
            Term::Intercept => Ok(1.0),
            Term::Numeric(n) => value(n),
            Term::Interaction(a, b) => {
                let touches = |v: &str| v == focal || moderator.is_some_and(|(m, _)| m == v);
                if touches(a) || touches(b) {
                    Ok(value(a)? * value(b)?)
                } else {
                    Ok(result.term_means[j])
                }
            }
            Term::Dummy { .. } => Ok(result.term_means[j]),
        })
        .collect()
}

fn involves(result: &RegressionResult, var: &str) -> bool {
    result.terms.iter().any(|t| match t {
        Term::Numeric(n) => n == var,
        Term::Interaction(a, b) => a == var || b == var,
        _ => false,
    })
}

pub fn predict_margins(
    result: &RegressionResult,
    focal: &str,
    grid: &[f64],
    moderator: Option<(&str, &[f64])>,
) -> Result<Vec<MarginPoint>> {
    if !involves(result, focal) {
        return Err(StatsError::UnknownTerm(focal.to_string()));
    }
    if let Some((m, _)) = moderator {
        if !involves(result, m) {
            return Err(StatsError::UnknownTerm(m.to_string()));
        }
    }
    let levels: Vec<Option<f64>> = match moderator {
        Some((_, levels)) => levels.iter().copied().map(Some).collect(),
        None => vec![None],
    };
    let k = result.coefficients.len();
    let mut out = Vec::with_capacity(levels.len() * grid.len());
    for level in levels {
        for &x in grid {
            let c = contrast(result, focal, x, moderator.zip(level).map(|((m, _), v)| (m, v)))?;
            let prediction: f64 = c.iter().zip(&result.coefficients).map(|(a, b)| a * b).sum();
            let mut var = 0.0;
            for a in 0..k {
                for b in 0..k {
                    var += c[a] * result.covariance[(a, b)] * c[b];
                }
            }
            let se = var.max(0.0).sqrt();
            out.push(MarginPoint {
                moderator: level,
                x,
                prediction,
                std_error: se,
                ci_low: prediction - Z_975 * se,
                ci_high: prediction + Z_975 * se,
            });
        }
    }
    Ok(out)
}

/// d(prediction)/d(focal) at a moderator value: the focal coefficient plus
/// the interaction coefficient times the moderator.
pub fn marginal_slope(result: &RegressionResult, focal: &str, moderator: Option<(&str, f64)>) -> Result<f64> {
    if !involves(result, focal) {
        return Err(StatsError::UnknownTerm(focal.to_string()));
    }
    let mut slope = 0.0;
    for (t, b) in result.terms.iter().zip(&result.coefficients) {
        match t {
            Term::Numeric(n) if n == focal => slope += b,
            Term::Interaction(a, c) if a == focal || c == focal => {
                let other = if a == focal { c } else { a };
                let v = match moderator {
                    Some((m, v)) if m == other => v,
                    _ => mean_of(result, other)?,
                };
                slope += b * v;
            }
            _ => {}
        }
    }
    Ok(slope)
}
