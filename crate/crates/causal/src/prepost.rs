//! Pre-post comparison of team structure and disruption around a cutoff year.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use teamdiv_stats::describe::mean;
use teamdiv_stats::kde::default_grid;
use teamdiv_stats::{gaussian_kde, mann_whitney_u, silverman_bandwidth, t_test_independent, MannWhitney, TTest};

use crate::error::{CausalError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodRow {
    pub year: i32,
    pub cc_count: u32,
    pub sd: f64,
    pub cd_norm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PrePostConfig {
    pub cutoff_year: i32,
    /// Inclusive year ranges.
    pub pre: (i32, i32),
    pub post: (i32, i32),
    pub kde_points: usize,
}

impl Default for PrePostConfig {
    fn default() -> Self {
        Self {
            cutoff_year: 2012,
            pre: (2010, 2011),
            post: (2012, 2013),
            kde_points: 128,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CcShare {
    pub cc: u32,
    pub count: usize,
    pub percent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodSummary {
    pub label: String,
    pub first_year: i32,
    pub last_year: i32,
    pub n: usize,
    pub mean_cc: f64,
    pub cc_distribution: Vec<CcShare>,
    pub mean_sd: f64,
    pub n_cd: usize,
    pub mean_cd_norm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SdDensity {
    pub x: Vec<f64>,
    pub pre: Vec<f64>,
    pub post: Vec<f64>,
    pub bandwidth_pre: f64,
    pub bandwidth_post: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrePostReport {
    pub cutoff_year: i32,
    pub pre: PeriodSummary,
    pub post: PeriodSummary,
    pub cc_test: MannWhitney,
    pub sd_test: MannWhitney,
    /// Welch test on cd_norm; missing with fewer than two values per period.
    pub cd_test: Option<TTest>,
    /// Missing when either period's SD values are constant.
    pub sd_density: Option<SdDensity>,
}

fn summarize(label: &str, range: (i32, i32), rows: &[&PeriodRow]) -> PeriodSummary {
    let cc: Vec<f64> = rows.iter().map(|r| r.cc_count as f64).collect();
    let sd: Vec<f64> = rows.iter().map(|r| r.sd).collect();
    let cd: Vec<f64> = rows.iter().filter_map(|r| r.cd_norm).collect();
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for r in rows {
        *counts.entry(r.cc_count).or_default() += 1;
    }
    let n = rows.len();
    PeriodSummary {
        label: label.into(),
        first_year: range.0,
        last_year: range.1,
        n,
        mean_cc: mean(&cc),
        cc_distribution: counts
            .into_iter()
            .map(|(cc, count)| CcShare {
                cc,
                count,
                percent: 100.0 * count as f64 / n as f64,
            })
            .collect(),
        mean_sd: mean(&sd),
        n_cd: cd.len(),
        mean_cd_norm: (!cd.is_empty()).then(|| mean(&cd)),
    }
}

pub fn prepost_report(rows: &[PeriodRow], cfg: &PrePostConfig) -> Result<PrePostReport> {
    let (pre_range, post_range) = (cfg.pre, cfg.post);
    if pre_range.0 > pre_range.1 || post_range.0 > post_range.1 {
        return Err(CausalError::InvalidInput("year ranges must be ordered".into()));
    }
    if pre_range.1 >= cfg.cutoff_year || post_range.0 < cfg.cutoff_year {
        return Err(CausalError::InvalidInput(format!(
            "pre period must end before {} and post period start at or after it",
            cfg.cutoff_year
        )));
    }
    let within = |r: &&PeriodRow, (lo, hi): (i32, i32)| r.year >= lo && r.year <= hi;
    let pre: Vec<&PeriodRow> = rows.iter().filter(|r| within(r, pre_range)).collect();
    let post: Vec<&PeriodRow> = rows.iter().filter(|r| within(r, post_range)).collect();
    if pre.is_empty() {
        return Err(CausalError::EmptyPeriod(format!("{}-{}", pre_range.0, pre_range.1)));
    }
    if post.is_empty() {
        return Err(CausalError::EmptyPeriod(format!("{}-{}", post_range.0, post_range.1)));
    }

    let cc = |v: &[&PeriodRow]| v.iter().map(|r| r.cc_count as f64).collect::<Vec<_>>();
    let sd = |v: &[&PeriodRow]| v.iter().map(|r| r.sd).collect::<Vec<_>>();
    let cd = |v: &[&PeriodRow]| v.iter().filter_map(|r| r.cd_norm).collect::<Vec<_>>();
    let (sd_pre, sd_post) = (sd(&pre), sd(&post));
    let (cd_pre, cd_post) = (cd(&pre), cd(&post));
    let cd_test = if cd_pre.len() >= 2 && cd_post.len() >= 2 {
        Some(t_test_independent(&cd_post, &cd_pre)?)
    } else {
        None
    };

    let sd_density = match (silverman_bandwidth(&sd_pre), silverman_bandwidth(&sd_post)) {
        (Ok(h_pre), Ok(h_post)) => {
            let all: Vec<f64> = sd_pre.iter().chain(&sd_post).copied().collect();
            let grid = default_grid(&all, h_pre.max(h_post), cfg.kde_points);
            let d_pre = gaussian_kde(&sd_pre, &grid, Some(h_pre))?;
            let d_post = gaussian_kde(&sd_post, &grid, Some(h_post))?;
            Some(SdDensity {
                x: grid,
                pre: d_pre.density,
                post: d_post.density,
                bandwidth_pre: h_pre,
                bandwidth_post: h_post,
            })
        }
        _ => None,
    };

    Ok(PrePostReport {
        cutoff_year: cfg.cutoff_year,
        cc_test: mann_whitney_u(&cc(&post), &cc(&pre))?,
        sd_test: mann_whitney_u(&sd_post, &sd_pre)?,
        cd_test,
        sd_density,
        pre: summarize("pre", pre_range, &pre),
        post: summarize("post", post_range, &post),
    })
}
