//! Ordinary least squares on a built design.
//!
//! Coefficients come from a Householder QR of the design (never from the
//! normal equations). Fixed effects can be either dummy-encoded by
//! [`build_design`] or absorbed by iterated group demeaning in
//! [`ols_absorbed`]; both give the same slope coefficients.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::design::{build_design, Design, FixedEffectSummary, ModelSpec, Term};
use crate::dist::t_two_sided_p;
use crate::error::{Result, StatsError};
use crate::frame::Frame;

const RANK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CovarianceKind {
    /// Homoskedastic sigma^2 (X'X)^-1.
    #[default]
    Classical,
    /// White sandwich with the n/(n-k) small-sample factor.
    Hc1,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegressionResult {
    pub outcome: String,
    pub terms: Vec<Term>,
    pub coefficients: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub t_values: Vec<f64>,
    pub p_values: Vec<f64>,
    /// For absorbed fits this is the within R^2.
    pub r_squared: f64,
    pub n_obs: usize,
    pub df_resid: usize,
    pub rss: f64,
    pub covariance_kind: CovarianceKind,
    #[serde(skip)]
    pub covariance: DMatrix<f64>,
    /// Sample mean of every design column, used by margins.
    pub term_means: Vec<f64>,
    pub fixed_effects: Vec<FixedEffectSummary>,
    pub dropped_rows: usize,
    pub absorbed: bool,
}

impl RegressionResult {
    pub fn term_index(&self, name: &str) -> Option<usize> {
        self.terms.iter().position(|t| t.name() == name)
    }

    pub fn coefficient(&self, name: &str) -> Option<f64> {
        self.term_index(name).map(|j| self.coefficients[j])
    }

    pub fn std_error(&self, name: &str) -> Option<f64> {
        self.term_index(name).map(|j| self.std_errors[j])
    }

    pub fn p_value(&self, name: &str) -> Option<f64> {
        self.term_index(name).map(|j| self.p_values[j])
    }

    pub fn term_names(&self) -> Vec<String> {
        self.terms.iter().map(Term::name).collect()
    }
}

struct Solved {
    beta: DVector<f64>,
    /// (X'X)^-1 = R^-1 R^-T
    xtx_inv: DMatrix<f64>,
    resid: DVector<f64>,
}

/// y - X b with each row summed by compensated dot product, so the result is
/// close to exact even when it is tiny next to the terms.
fn accurate_residual(x: &DMatrix<f64>, y: &DVector<f64>, beta: &DVector<f64>) -> DVector<f64> {
    DVector::from_fn(x.nrows(), |i, _| {
        let (mut s, mut c) = (y[i], 0.0);
        for j in 0..x.ncols() {
            let p = -x[(i, j)] * beta[j];
            let pe = (-x[(i, j)]).mul_add(beta[j], -p);
            let t = s + p;
            let z = t - s;
            c += (s - (t - z)) + (p - z) + pe;
            s = t;
        }
        s + c
    })
}

fn qr_solve(x: &DMatrix<f64>, y: &DVector<f64>, terms: &[Term]) -> Result<Solved> {
    let (n, p) = x.shape();
    if n <= p {
        return Err(StatsError::TooFewObservations { needed: p, got: n });
    }
    let norms: Vec<f64> = x.column_iter().map(|c| c.norm()).collect();
    let qr = x.clone().qr();
    let r = qr.r();
    let dependent: Vec<String> = (0..p)
        .filter(|&j| norms[j] == 0.0 || r[(j, j)].abs() <= RANK_TOL * norms[j])
        .map(|j| terms[j].name())
        .collect();
    if !dependent.is_empty() {
        return Err(StatsError::RankDeficient(dependent));
    }
    let mut qty = y.clone();
    qr.q_tr_mul(&mut qty);
    let rhs = qty.rows(0, p).into_owned();
    let singular = || StatsError::RankDeficient(terms.iter().map(Term::name).collect());
    let mut beta = r.solve_upper_triangular(&rhs).ok_or_else(singular)?;
    // one step of iterative refinement against an accurately computed residual
    let mut qtr = accurate_residual(x, y, &beta);
    qr.q_tr_mul(&mut qtr);
    if let Some(delta) = r.solve_upper_triangular(&qtr.rows(0, p).into_owned()) {
        beta += delta;
    }
    let r_inv = r
        .solve_upper_triangular(&DMatrix::identity(p, p))
        .ok_or_else(singular)?;
    let xtx_inv = &r_inv * r_inv.transpose();
    let resid = y - x * &beta;
    Ok(Solved {
        beta,
        xtx_inv,
        resid,
    })
}

fn sandwich(x: &DMatrix<f64>, resid: &DVector<f64>, bread: &DMatrix<f64>) -> DMatrix<f64> {
    let (n, p) = x.shape();
    let mut meat = DMatrix::<f64>::zeros(p, p);
    for i in 0..n {
        let e2 = resid[i] * resid[i];
        for a in 0..p {
            let xa = x[(i, a)] * e2;
            if xa == 0.0 {
                continue;
            }
            for b in 0..p {
                meat[(a, b)] += xa * x[(i, b)];
            }
        }
    }
    let scale = n as f64 / (n - p) as f64;
    bread * meat * bread * scale
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    outcome: &str,
    terms: Vec<Term>,
    x: &DMatrix<f64>,
    solved: Solved,
    df_resid: usize,
    tss: f64,
    kind: CovarianceKind,
    fixed_effects: Vec<FixedEffectSummary>,
    dropped_rows: usize,
    absorbed: bool,
) -> RegressionResult {
    let n = x.nrows();
    let rss = solved.resid.norm_squared();
    let sigma2 = rss / df_resid as f64;
    let covariance = match kind {
        CovarianceKind::Classical => &solved.xtx_inv * sigma2,
        CovarianceKind::Hc1 => sandwich(x, &solved.resid, &solved.xtx_inv),
    };
    let coefficients: Vec<f64> = solved.beta.iter().copied().collect();
    let std_errors: Vec<f64> = (0..coefficients.len())
        .map(|j| covariance[(j, j)].max(0.0).sqrt())
        .collect();
    let t_values: Vec<f64> = coefficients
        .iter()
        .zip(&std_errors)
        .map(|(b, s)| b / s)
        .collect();
    let p_values = t_values
        .iter()
        .map(|&t| t_two_sided_p(t, df_resid as f64))
        .collect();
    let term_means = x
        .column_iter()
        .map(|c| c.sum() / n as f64)
        .collect();
    let r_squared = if tss > 0.0 {
        (1.0 - rss / tss).clamp(0.0, 1.0)
    } else {
        0.0
    };
    RegressionResult {
        outcome: outcome.to_string(),
        terms,
        coefficients,
        std_errors,
        t_values,
        p_values,
        r_squared,
        n_obs: n,
        df_resid,
        rss,
        covariance_kind: kind,
        covariance,
        term_means,
        fixed_effects,
        dropped_rows,
        absorbed,
    }
}

pub fn ols_fit(design: &Design, kind: CovarianceKind) -> Result<RegressionResult> {
    let solved = qr_solve(&design.x, &design.y, &design.terms)?;
    let n = design.n_obs();
    let has_intercept = design.terms.contains(&Term::Intercept);
    let tss = if has_intercept {
        let m = design.y.mean();
        design.y.iter().map(|v| (v - m) * (v - m)).sum()
    } else {
        design.y.norm_squared()
    };
    Ok(assemble(
        &design.outcome,
        design.terms.clone(),
        &design.x,
        solved,
        n - design.x.ncols(),
        tss,
        kind,
        design.fixed_effects.clone(),
        design.dropped_rows,
        false,
    ))
}

/// Builds the design for `spec` and fits it.
pub fn fit_model(frame: &Frame, spec: &ModelSpec, kind: CovarianceKind) -> Result<RegressionResult> {
    ols_fit(&build_design(frame, spec)?, kind)
}

/// Subtracts group means for every key in turn until the columns stop
/// changing (alternating projections). One key converges in a single sweep.
pub fn demean_by_groups(columns: &mut [Vec<f64>], groups: &[Vec<usize>], n_levels: &[usize]) {
    const MAX_SWEEPS: usize = 10_000;
    for col in columns.iter_mut() {
        let scale = col.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
        for _ in 0..MAX_SWEEPS {
            let mut max_shift = 0.0f64;
            for (g, &levels) in groups.iter().zip(n_levels) {
                let mut sums = vec![0.0; levels];
                let mut counts = vec![0usize; levels];
                for (v, &l) in col.iter().zip(g) {
                    sums[l] += v;
                    counts[l] += 1;
                }
                for (s, &c) in sums.iter_mut().zip(&counts) {
                    if c > 0 {
                        *s /= c as f64;
                    }
                }
                for (v, &l) in col.iter_mut().zip(g) {
                    *v -= sums[l];
                }
                max_shift = sums.iter().fold(max_shift, |m, s| m.max(s.abs()));
            }
            if groups.len() <= 1 || max_shift <= 1e-15 * scale {
                break;
            }
        }
    }
}

/// Fits `spec` with its fixed effects absorbed by within-group demeaning.
///
/// Degrees of freedom subtract one per absorbed level, minus one per extra
/// key, which is exact when the fixed-effect levels form a connected design.
pub fn ols_absorbed(frame: &Frame, spec: &ModelSpec, kind: CovarianceKind) -> Result<RegressionResult> {
    let keys = spec
        .fixed_effects
        .iter()
        .map(|k| frame.categorical(k))
        .collect::<Result<Vec<_>>>()?;
    let keyed: Vec<usize> = (0..frame.len())
        .filter(|&i| keys.iter().all(|k| k[i].is_some()))
        .collect();
    let sub = frame.select_rows(&keyed);
    let inner = ModelSpec {
        fixed_effects: Vec::new(),
        intercept: spec.fixed_effects.is_empty() && spec.intercept,
        ..spec.clone()
    };
    let design = build_design(&sub, &inner)?;
    let mut groups = Vec::new();
    let mut n_levels = Vec::new();
    let mut fixed_effects = Vec::new();
    for (key, col) in spec.fixed_effects.iter().zip(&keys) {
        let mut index = std::collections::BTreeMap::new();
        let labels: Vec<&str> = design
            .rows
            .iter()
            .map(|&r| col[keyed[r]].as_deref().unwrap())
            .collect();
        for l in &labels {
            let next = index.len();
            index.entry(*l).or_insert(next);
        }
        groups.push(labels.iter().map(|l| index[l]).collect::<Vec<_>>());
        n_levels.push(index.len());
        fixed_effects.push(FixedEffectSummary {
            key: key.clone(),
            levels: index.len(),
            reference: String::new(),
        });
    }
    let (n, p) = design.x.shape();
    let mut cols: Vec<Vec<f64>> = design.x.column_iter().map(|c| c.iter().copied().collect()).collect();
    cols.push(design.y.iter().copied().collect());
    demean_by_groups(&mut cols, &groups, &n_levels);
    let y = DVector::from_vec(cols.pop().unwrap());
    let x = DMatrix::from_fn(n, p, |i, j| cols[j][i]);
    let absorbed_dof = if n_levels.is_empty() {
        0
    } else {
        n_levels.iter().sum::<usize>() - (n_levels.len() - 1)
    };
    if n <= p + absorbed_dof {
        return Err(StatsError::TooFewObservations {
            needed: p + absorbed_dof,
            got: n,
        });
    }
    let solved = qr_solve(&x, &y, &design.terms)?;
    let tss = y.norm_squared();
    let dropped = frame.len() - n;
    let mut result = assemble(
        &spec.outcome,
        design.terms.clone(),
        &x,
        solved,
        n - p - absorbed_dof,
        tss,
        kind,
        fixed_effects,
        dropped,
        true,
    );
    // margins need means of the raw columns, not the demeaned ones
    result.term_means = design.x.column_iter().map(|c| c.sum() / n as f64).collect();
    Ok(result)
}

/// Coefficients of a weighted least-squares fit via Cholesky of X'WX.
///
/// Meant for resampling loops where integer bootstrap counts are the weights;
/// returns `None` when X'WX is not positive definite.
pub fn weighted_coefficients(x: &DMatrix<f64>, y: &DVector<f64>, weights: &[f64]) -> Option<DVector<f64>> {
    let (n, p) = x.shape();
    let mut xtwx = DMatrix::<f64>::zeros(p, p);
    let mut xtwy = DVector::<f64>::zeros(p);
    let mut row = vec![0.0; p];
    for i in 0..n {
        let w = weights[i];
        if w == 0.0 {
            continue;
        }
        for (j, r) in row.iter_mut().enumerate() {
            *r = x[(i, j)];
        }
        for a in 0..p {
            let wa = w * row[a];
            xtwy[a] += wa * y[i];
            for b in a..p {
                xtwx[(a, b)] += wa * row[b];
            }
        }
    }
    for a in 0..p {
        for b in 0..a {
            xtwx[(a, b)] = xtwx[(b, a)];
        }
    }
    xtwx.cholesky().map(|c| c.solve(&xtwy))
}
