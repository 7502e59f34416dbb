use std::collections::BTreeSet;

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use teamdiv_core::rows_to_frame;
use teamdiv_stats::dist::Z_975;
use teamdiv_stats::{fit_model, marginal_slope, predict_margins, Frame, ModelSpec, RegressionResult};

use super::{finish, load_rows, Ctx};
use crate::config::RegressSection;
use crate::output::Staging;
use crate::{Command, Status};

#[derive(Debug, Clone, Serialize)]
pub struct CoefficientRow {
    pub model: String,
    pub term: String,
    pub estimate: f64,
    pub std_error: f64,
    pub t_value: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DisciplineFit {
    pub discipline: String,
    pub n_obs: usize,
    pub estimate: Option<f64>,
    pub std_error: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub p_value: Option<f64>,
    pub r_squared: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MarginRow {
    pub team_size: u32,
    pub moderator: f64,
    pub exposure: f64,
    pub prediction: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SlopeRow {
    pub team_size: u32,
    pub moderator: f64,
    pub slope: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Margins {
    pub exposure: String,
    pub moderator: String,
    pub points: Vec<MarginRow>,
    pub slopes: Vec<SlopeRow>,
    /// Slopes strictly increase with team size.
    pub slopes_increasing: bool,
}

pub fn main_spec(r: &RegressSection) -> ModelSpec {
    let mut preds: Vec<&str> = vec![r.exposure.as_str()];
    preds.extend(r.controls.iter().map(String::as_str).filter(|c| *c != r.exposure));
    let mut spec = ModelSpec::new(&r.outcome, &preds);
    for fe in &r.fixed_effects {
        spec = spec.fixed_effect(fe);
    }
    spec
}

pub fn interaction_spec(r: &RegressSection) -> ModelSpec {
    let mut spec = main_spec(r);
    if !r.controls.contains(&r.moderator) {
        spec.predictors.push(r.moderator.clone());
    }
    spec.interaction(&r.exposure, &r.moderator)
}

fn coefficient_rows(model: &str, fit: &RegressionResult) -> Vec<CoefficientRow> {
    fit.term_names()
        .into_iter()
        .enumerate()
        .map(|(j, term)| CoefficientRow {
            model: model.to_string(),
            term,
            estimate: fit.coefficients[j],
            std_error: fit.std_errors[j],
            t_value: fit.t_values[j],
            p_value: fit.p_values[j],
        })
        .collect()
}

fn discipline_fit(frame: &Frame, labels: &[String], d: &str, r: &RegressSection) -> DisciplineFit {
    let sub = frame.filter(|i| labels[i] == d);
    let mut spec = main_spec(r);
    spec.fixed_effects.retain(|k| k != "discipline");
    let fit = fit_model(&sub, &spec, r.covariance);
    let n_obs = sub.len();
    match fit {
        Ok(f) => {
            let b = f.coefficient(&r.exposure);
            let se = f.std_error(&r.exposure);
            DisciplineFit {
                discipline: d.to_string(),
                n_obs: f.n_obs,
                estimate: b,
                std_error: se,
                ci_low: b.zip(se).map(|(b, s)| b - Z_975 * s),
                ci_high: b.zip(se).map(|(b, s)| b + Z_975 * s),
                p_value: f.p_value(&r.exposure),
                r_squared: Some(f.r_squared),
                error: None,
            }
        }
        Err(e) => DisciplineFit {
            discipline: d.to_string(),
            n_obs,
            estimate: None,
            std_error: None,
            ci_low: None,
            ci_high: None,
            p_value: None,
            r_squared: None,
            error: Some(e.to_string()),
        },
    }
}

pub fn margins(fit: &RegressionResult, r: &RegressSection) -> Result<Margins> {
    let levels: Vec<f64> = r.margin_team_sizes.iter().map(|&s| f64::from(s).ln()).collect();
    let pts = predict_margins(fit, &r.exposure, &r.margin_grid, Some((&r.moderator, &levels)))?;
    let per_level = r.margin_grid.len();
    let points = pts
        .into_iter()
        .enumerate()
        .map(|(i, p)| MarginRow {
            team_size: r.margin_team_sizes[i / per_level.max(1)],
            moderator: p.moderator.unwrap_or(f64::NAN),
            exposure: p.x,
            prediction: p.prediction,
            std_error: p.std_error,
            ci_low: p.ci_low,
            ci_high: p.ci_high,
        })
        .collect();
    let slopes = r
        .margin_team_sizes
        .iter()
        .zip(&levels)
        .map(|(&team_size, &m)| {
            Ok(SlopeRow {
                team_size,
                moderator: m,
                slope: marginal_slope(fit, &r.exposure, Some((&r.moderator, m)))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut by_size: Vec<&SlopeRow> = slopes.iter().collect();
    by_size.sort_by_key(|s| s.team_size);
    let slopes_increasing = by_size.windows(2).all(|w| w[1].slope > w[0].slope);
    Ok(Margins {
        exposure: r.exposure.clone(),
        moderator: r.moderator.clone(),
        points,
        slopes,
        slopes_increasing,
    })
}

pub fn run(ctx: &Ctx) -> Result<Status> {
    let r = &ctx.cfg.regress;
    let (rows, rows_path) = load_rows(ctx)?;
    let frame = rows_to_frame(&rows);

    let main = fit_model(&frame, &main_spec(r), r.covariance).context("main model")?;
    let inter = fit_model(&frame, &interaction_spec(r), r.covariance).context("interaction model")?;
    let mut coefs = coefficient_rows("main", &main);
    coefs.extend(coefficient_rows("interaction", &inter));
    let margins = margins(&inter, r)?;

    let mut st = Staging::new(&ctx.cfg.output_dir)?;
    st.json("regress_main.json", &ctx.hash, "model", &main)?;
    st.json("regress_interaction.json", &ctx.hash, "model", &inter)?;
    st.csv("regress_coefficients.csv", &ctx.hash, &coefs)?;
    st.json("regress_margins.json", &ctx.hash, "margins", &margins)?;
    st.csv("regress_margins.csv", &ctx.hash, &margins.points)?;
    st.csv("regress_slopes.csv", &ctx.hash, &margins.slopes)?;

    if r.per_discipline {
        let labels: Vec<String> = rows.iter().map(|x| x.discipline.clone()).collect();
        let disciplines: Vec<&String> = labels.iter().collect::<BTreeSet<_>>().into_iter().collect();
        let fits: Vec<DisciplineFit> = disciplines
            .par_iter()
            .map(|d| discipline_fit(&frame, &labels, d, r))
            .collect();
        st.json("regress_disciplines.json", &ctx.hash, "disciplines", &fits)?;
        st.csv("regress_disciplines.csv", &ctx.hash, &fits)?;
    }

    finish(ctx, Command::Regress, None, &[rows_path], st)?;
    Ok(Status::Success)
}
