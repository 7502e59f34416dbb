use anyhow::{Context, Result};
use serde::Serialize;

use teamdiv_causal::{
    mediation_analysis, prepost_report, psm_decile_sweep, psm_quartile, DecileContrast, MatchReport, PeriodRow,
};
use teamdiv_core::rows_to_frame;
use teamdiv_stats::{binned_means_fit, BinnedFit};

use super::{finish, load_rows, Ctx};
use crate::output::Staging;
use crate::{Command, Status};

#[derive(Debug, Serialize)]
struct PsmReport<'a> {
    quartile: &'a MatchReport,
    deciles: &'a [DecileContrast],
}

#[derive(Debug, Serialize)]
struct BalanceLine<'a> {
    contrast: &'a str,
    covariate: &'a str,
    smd_before: Option<f64>,
    smd_after: Option<f64>,
    undefined_after: bool,
}

#[derive(Debug, Serialize)]
struct ContrastLine<'a> {
    contrast: &'a str,
    n_treated: usize,
    n_control: usize,
    n_matched: usize,
    balanced: bool,
    att: f64,
    ci_low: f64,
    ci_high: f64,
    p_value: Option<f64>,
}

#[derive(Debug, Serialize)]
struct PairLine<'a> {
    treated_id: &'a str,
    control_id: &'a str,
    gap: f64,
}

fn contrast_line<'a>(label: &'a str, r: &MatchReport) -> ContrastLine<'a> {
    ContrastLine {
        contrast: label,
        n_treated: r.n_treated,
        n_control: r.n_control,
        n_matched: r.n_matched,
        balanced: r.balanced,
        att: r.att.estimate,
        ci_low: r.att.ci_low,
        ci_high: r.att.ci_high,
        p_value: r.att.p_value,
    }
}

pub fn psm(ctx: &Ctx) -> Result<Status> {
    let cfg = &ctx.cfg.psm;
    let (rows, rows_path) = load_rows(ctx)?;
    let frame = rows_to_frame(&rows);
    let ids: Vec<String> = rows.iter().map(|r| r.paper_id.clone()).collect();

    let quartile = psm_quartile(&frame, &ids, cfg).context("quartile matching")?;
    let deciles = psm_decile_sweep(&frame, &ids, cfg).context("decile sweep")?;

    let mut balance = Vec::new();
    let mut contrasts = vec![contrast_line("quartile", &quartile)];
    let all = std::iter::once(("quartile", &quartile)).chain(deciles.iter().map(|d| (d.label.as_str(), &d.report)));
    for (label, report) in all {
        balance.extend(report.balance.iter().map(|b| BalanceLine {
            contrast: label,
            covariate: &b.covariate,
            smd_before: b.smd_before,
            smd_after: b.smd_after,
            undefined_after: b.undefined_after,
        }));
    }
    contrasts.extend(deciles.iter().map(|d| contrast_line(&d.label, &d.report)));
    let pairs: Vec<PairLine> = quartile
        .pairs
        .iter()
        .map(|p| PairLine {
            treated_id: &p.treated_id,
            control_id: &p.control_id,
            gap: p.gap,
        })
        .collect();

    let mut st = Staging::new(&ctx.cfg.output_dir)?;
    let report = PsmReport {
        quartile: &quartile,
        deciles: &deciles,
    };
    st.json("psm_report.json", &ctx.hash, "psm", &report)?;
    st.csv("psm_contrasts.csv", &ctx.hash, &contrasts)?;
    st.csv("psm_balance.csv", &ctx.hash, &balance)?;
    st.csv("psm_pairs.csv", &ctx.hash, &pairs)?;
    finish(ctx, Command::Psm, Some(cfg.seed), &[rows_path], st)?;

    if ctx.require_balance && !quartile.balanced {
        return Ok(Status::Unbalanced);
    }
    Ok(Status::Success)
}

#[derive(Debug, Serialize)]
struct CcLine<'a> {
    period: &'a str,
    cc: u32,
    count: usize,
    percent: f64,
}

#[derive(Debug, Serialize)]
struct KdeLine {
    sd: f64,
    pre: f64,
    post: f64,
}

pub fn prepost(ctx: &Ctx) -> Result<Status> {
    let (rows, rows_path) = load_rows(ctx)?;
    let nsf_only = ctx.cfg.filters.prepost_nsf_only;
    let period_rows: Vec<PeriodRow> = rows
        .iter()
        .filter(|r| !nsf_only || r.nsf_funded == 1)
        .map(|r| PeriodRow {
            year: r.year,
            cc_count: r.cc_count as u32,
            sd: r.sd,
            cd_norm: r.cd_norm,
        })
        .collect();
    let report = prepost_report(&period_rows, &ctx.cfg.prepost)?;

    let mut cc = Vec::new();
    for p in [&report.pre, &report.post] {
        cc.extend(p.cc_distribution.iter().map(|s| CcLine {
            period: &p.label,
            cc: s.cc,
            count: s.count,
            percent: s.percent,
        }));
    }
    let kde: Vec<KdeLine> = report
        .sd_density
        .iter()
        .flat_map(|d| {
            (0..d.x.len()).map(|i| KdeLine {
                sd: d.x[i],
                pre: d.pre[i],
                post: d.post[i],
            })
        })
        .collect();

    let mut st = Staging::new(&ctx.cfg.output_dir)?;
    st.json("prepost_report.json", &ctx.hash, "prepost", &report)?;
    st.csv("prepost_cc.csv", &ctx.hash, &cc)?;
    st.csv("prepost_sd_kde.csv", &ctx.hash, &kde)?;
    finish(ctx, Command::Prepost, None, &[rows_path], st)?;
    Ok(Status::Success)
}

#[derive(Debug, Serialize)]
struct PathLine<'a> {
    path: &'a str,
    estimate: f64,
    std_error: Option<f64>,
    p_value: f64,
    ci_low: Option<f64>,
    ci_high: Option<f64>,
}

pub fn mediate(ctx: &Ctx) -> Result<Status> {
    let cfg = &ctx.cfg.mediation;
    let (rows, rows_path) = load_rows(ctx)?;
    let frame = rows_to_frame(&rows);
    let m = mediation_analysis(&frame, cfg).context("mediation")?;

    let line = |path, e: &teamdiv_causal::PathEstimate| PathLine {
        path,
        estimate: e.estimate,
        std_error: Some(e.std_error),
        p_value: e.p_value,
        ci_low: None,
        ci_high: None,
    };
    let lines = vec![
        line("a", &m.a),
        line("b", &m.b),
        line("total", &m.total),
        line("direct", &m.direct),
        PathLine {
            path: "indirect",
            estimate: m.indirect,
            std_error: None,
            p_value: m.indirect_p,
            ci_low: Some(m.indirect_ci.0),
            ci_high: Some(m.indirect_ci.1),
        },
    ];

    let mut st = Staging::new(&ctx.cfg.output_dir)?;
    st.json("mediation.json", &ctx.hash, "mediation", &m)?;
    st.csv("mediation.csv", &ctx.hash, &lines)?;
    finish(ctx, Command::Mediate, Some(cfg.seed), &[rows_path], st)?;
    Ok(Status::Success)
}

#[derive(Debug, Serialize)]
struct PredictorFit {
    predictor: String,
    n: usize,
    fit: BinnedFit,
}

#[derive(Debug, Serialize)]
struct BinLine<'a> {
    predictor: &'a str,
    bin: usize,
    count: usize,
    mean_x: f64,
    mean_y: f64,
}

pub fn bin_fit(ctx: &Ctx) -> Result<Status> {
    let cfg = &ctx.cfg.bin_fit;
    let (rows, rows_path) = load_rows(ctx)?;
    let frame = rows_to_frame(&rows);
    let mut fits = Vec::with_capacity(cfg.predictors.len());
    for p in &cfg.predictors {
        let (_, cols) = frame.complete_cases(&[p.as_str(), cfg.outcome.as_str()])?;
        let fit = binned_means_fit(&cols[0], &cols[1], cfg.n_bins).with_context(|| format!("binning {p}"))?;
        fits.push(PredictorFit {
            predictor: p.clone(),
            n: cols[0].len(),
            fit,
        });
    }
    let lines: Vec<BinLine> = fits
        .iter()
        .flat_map(|f| {
            f.fit.bins.iter().enumerate().map(|(i, b)| BinLine {
                predictor: &f.predictor,
                bin: i + 1,
                count: b.count,
                mean_x: b.mean_x,
                mean_y: b.mean_y,
            })
        })
        .collect();

    let mut st = Staging::new(&ctx.cfg.output_dir)?;
    st.json("bin_fit.json", &ctx.hash, "fits", &fits)?;
    st.csv("bin_fit.csv", &ctx.hash, &lines)?;
    finish(ctx, Command::BinFit, None, &[rows_path], st)?;
    Ok(Status::Success)
}
