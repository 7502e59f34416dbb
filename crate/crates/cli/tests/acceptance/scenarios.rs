//! Criteria 4-9 and 11: planted-effect recovery on generated corpora, shape
//! checks and end-to-end determinism.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use teamdiv::commands::regress::{interaction_spec, main_spec, margins};
use teamdiv::config::RegressSection;
use teamdiv_causal::{
    mediation_analysis, prepost_report, psm_decile_sweep, psm_quartile, MediationConfig, PeriodRow, PrePostConfig,
    PsmConfig,
};
use teamdiv_core::{compute_metrics, rows_to_frame, Corpus, MetricRow, MetricsOptions};
use teamdiv_stats::dist::Z_975;
use teamdiv_stats::{binned_means_fit, fit_model, CovarianceKind, Frame};
use teamdiv_synth::{binned_relations, generate_corpus, SynthConfig};

use crate::{ensure, Outcome};

pub struct Scenario {
    pub rows: Vec<MetricRow>,
    pub frame: Frame,
    pub ids: Vec<String>,
}

fn scenario(cfg: &SynthConfig) -> Result<Scenario, String> {
    let out = generate_corpus(cfg).map_err(|e| e.to_string())?;
    let opts = MetricsOptions {
        h_index: Some(out.h_index.clone()),
        ..MetricsOptions::default()
    };
    let (rows, _) = compute_metrics(&Corpus::from_records(out.records), &opts).map_err(|e| e.to_string())?;
    let frame = rows_to_frame(&rows);
    let ids = rows.iter().map(|r| r.paper_id.clone()).collect();
    Ok(Scenario { rows, frame, ids })
}

fn synth(seed: u64, n: usize) -> SynthConfig {
    SynthConfig {
        seed: Some(seed),
        n_papers: n,
        ..SynthConfig::default()
    }
}

pub fn interaction() -> Outcome {
    let cfg = SynthConfig {
        beta_sd: 0.016,
        beta_interaction: 0.017,
        beta_team_size: -0.031,
        h_effect: 0.99,
        citers_per_paper: 60,
        cd_scale: 0.2,
        ..synth(401, 100_000)
    };
    let s = scenario(&cfg)?;
    ensure!(s.rows.len() == 100_000, "sample has {} rows", s.rows.len());
    let spec = RegressSection::default();
    let fit = fit_model(&s.frame, &interaction_spec(&spec), CovarianceKind::Classical).map_err(|e| e.to_string())?;
    let term = "sd_std:log_team_size";
    let (b, bi) = (fit.coefficient("sd_std").unwrap(), fit.coefficient(term).unwrap());
    let (p, pi) = (fit.p_value("sd_std").unwrap(), fit.p_value(term).unwrap());
    ensure!((b - 0.016).abs() <= 0.005, "beta_sd {b:.4} outside 0.016 +- 0.005");
    ensure!((bi - 0.017).abs() <= 0.005, "beta_interaction {bi:.4} outside 0.017 +- 0.005");
    ensure!(p < 0.001 && pi < 0.001, "p values {p:.2e}, {pi:.2e} not below 0.001");
    let m = margins(&fit, &spec).map_err(|e| e.to_string())?;
    ensure!(m.slopes_increasing, "margin slopes not increasing: {:?}", m.slopes);
    let slopes: Vec<String> = m.slopes.iter().map(|s| format!("{}:{:.4}", s.team_size, s.slope)).collect();
    Ok(format!(
        "beta_sd {b:.4} (p {p:.1e}), beta_sdxlog_size {bi:.4} (p {pi:.1e}); slopes by team size {}",
        slopes.join(" ")
    ))
}

pub fn main_effect() -> Outcome {
    let spec = RegressSection::default();
    let cfg = SynthConfig {
        beta_sd: 0.03,
        ..synth(501, 100_000)
    };
    let s = scenario(&cfg)?;
    let fit = fit_model(&s.frame, &main_spec(&spec), CovarianceKind::Classical).map_err(|e| e.to_string())?;
    let (b, p) = (fit.coefficient("sd_std").unwrap(), fit.p_value("sd_std").unwrap());
    ensure!((b - 0.03).abs() <= 0.01, "beta_sd {b:.4} outside 0.03 +- 0.01");
    ensure!(p < 0.001, "p {p:.2e} not below 0.001");

    let mut covered = 0;
    for rep in 0..100u64 {
        let s = scenario(&synth(10_000 + rep, 2000))?;
        let f = fit_model(&s.frame, &main_spec(&spec), CovarianceKind::Classical).map_err(|e| e.to_string())?;
        let (b, se) = (f.coefficient("sd_std").unwrap(), f.std_error("sd_std").unwrap());
        if (b - Z_975 * se..=b + Z_975 * se).contains(&0.0) {
            covered += 1;
        }
    }
    ensure!(covered >= 90, "null CI covered 0 in {covered}/100");
    Ok(format!(
        "beta_sd {b:.4} (p {p:.1e}) at n = 100k; null 95% CI covers 0 in {covered}/100 replications"
    ))
}

pub fn psm() -> Outcome {
    let start = Instant::now();
    let cfg = SynthConfig {
        treatment_effect: 0.5,
        beta_team_size: -0.3,
        isolate_prob: 0.08,
        h_effect: 0.8,
        ..synth(601, 20_000)
    };
    let s = scenario(&cfg)?;
    let psm_cfg = PsmConfig {
        caliper: Some(0.05),
        seed: 6,
        ..PsmConfig::default()
    };
    let q = psm_quartile(&s.frame, &s.ids, &psm_cfg).map_err(|e| e.to_string())?;
    let worst = q
        .balance
        .iter()
        .map(|b| (b.covariate.as_str(), b.smd_after.map_or(f64::INFINITY, f64::abs)))
        .fold(("", 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    ensure!(worst.1 < 0.1, "|SMD| {:.3} on {} after matching", worst.1, worst.0);
    let ts = q.balance.iter().find(|b| b.covariate == "log_team_size").unwrap();
    let (before, after) = (ts.smd_before.unwrap().abs(), ts.smd_after.unwrap().abs());
    ensure!(after <= before, "confounder SMD grew from {before:.3} to {after:.3}");
    let att = q.att.estimate;
    ensure!((att - 0.5).abs() <= 0.05, "ATT {att:.3} outside 0.5 +- 0.05");

    let sweep_cfg = SynthConfig {
        beta_sd: 0.5,
        beta_team_size: -0.3,
        isolate_prob: 0.08,
        h_effect: 0.7,
        ..synth(602, 20_000)
    };
    let s = scenario(&sweep_cfg)?;
    let sweep = psm_decile_sweep(&s.frame, &s.ids, &psm_cfg).map_err(|e| e.to_string())?;
    let atts: Vec<f64> = sweep.iter().map(|d| d.report.att.estimate).collect();
    ensure!(atts.windows(2).all(|w| w[0] > w[1]), "decile ATTs not strictly decreasing: {atts:?}");
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 60.0, "took {secs:.1}s, limit 60s");
    let shown: Vec<String> = atts.iter().map(|a| format!("{a:.3}")).collect();
    Ok(format!(
        "max |SMD| {:.3} ({}), {} pairs, ATT {att:.3} [{:.3}, {:.3}]; d1..d5 ATT {}; {secs:.1}s (< 60s)",
        worst.1,
        worst.0,
        q.n_matched,
        q.att.ci_low,
        q.att.ci_high,
        shown.join(" > ")
    ))
}

pub fn mediation() -> Outcome {
    let cfg = SynthConfig {
        beta_sd: 0.3,
        a_path: 0.5,
        b_path: 0.4,
        h_effect: 0.5,
        ..synth(701, 50_000)
    };
    let s = scenario(&cfg)?;
    let med = MediationConfig {
        n_bootstrap: 400,
        seed: 7,
        ..MediationConfig::default()
    };
    let r = mediation_analysis(&s.frame, &med).map_err(|e| e.to_string())?;
    let prop = r.proportion_mediated.ok_or("proportion missing")?;
    ensure!((r.indirect - 0.2).abs() <= 0.02, "indirect {:.4} outside 0.2 +- 0.02", r.indirect);
    ensure!((prop - 0.4).abs() <= 0.05, "proportion {prop:.4} outside 0.4 +- 0.05");
    ensure!(
        r.a.estimate > 0.0 && r.b.estimate > 0.0 && r.indirect > 0.0,
        "signs a {:.4}, b {:.4}, indirect {:.4}",
        r.a.estimate,
        r.b.estimate,
        r.indirect
    );

    let null_cfg = SynthConfig {
        a_path: 0.0,
        ..cfg.clone()
    };
    let cfg20 = SynthConfig {
        n_papers: 20_000,
        seed: Some(702),
        ..null_cfg
    };
    let s = scenario(&cfg20)?;
    let n = mediation_analysis(&s.frame, &med).map_err(|e| e.to_string())?;
    let (lo, hi) = n.indirect_ci;
    ensure!(lo <= 0.0 && 0.0 <= hi, "null indirect CI [{lo:.4}, {hi:.4}] misses 0");
    Ok(format!(
        "indirect {:.4}, total {:.4}, proportion {prop:.3}, a {:.4} > 0, b {:.3} > 0; null CI [{lo:.4}, {hi:.4}]",
        r.indirect, r.total.estimate, r.a.estimate, r.b.estimate
    ))
}

pub fn prepost() -> Outcome {
    let cfg = SynthConfig {
        first_year: 2010,
        last_year: 2013,
        mean_cc: Some(2.10),
        shock_year: Some(2012),
        shock_cc_shift: 0.18,
        shock_cd: 0.15,
        ..synth(801, 40_000)
    };
    let s = scenario(&cfg)?;
    let rows: Vec<PeriodRow> = s
        .rows
        .iter()
        .filter(|r| r.nsf_funded == 1)
        .map(|r| PeriodRow {
            year: r.year,
            cc_count: r.cc_count as u32,
            sd: r.sd,
            cd_norm: r.cd_norm,
        })
        .collect();
    let rep = prepost_report(&rows, &PrePostConfig::default()).map_err(|e| e.to_string())?;
    let mw = rep.cc_test.p_value;
    let tp = rep.cd_test.and_then(|t| t.p_value).ok_or("t-test missing")?;
    ensure!(rep.post.mean_cc > rep.pre.mean_cc, "mean CC did not rise");
    ensure!(mw < 0.001, "Mann-Whitney p {mw:.2e}");
    ensure!(tp < 0.001, "t-test p {tp:.2e}");
    Ok(format!(
        "mean CC {:.3} -> {:.3} (n {} / {}), Mann-Whitney p {mw:.1e}, CD t-test p {tp:.1e}",
        rep.pre.mean_cc, rep.post.mean_cc, rep.pre.n, rep.post.n
    ))
}

pub fn binned() -> Outcome {
    let rels = binned_relations(20_000, 9);
    let mut r2 = BTreeMap::new();
    for r in &rels {
        let fit = binned_means_fit(&r.x, &r.y, 20).map_err(|e| e.to_string())?;
        r2.insert(r.name, fit.r_squared);
    }
    let (s, w, n) = (r2["strong"], r2["weak"], r2["null"]);
    ensure!(s > w && w > n, "R^2 strong {s:.3}, weak {w:.3}, null {n:.3} out of order");
    Ok(format!("R^2 strong {s:.3} > weak {w:.3} > null {n:.3}"))
}

const PIPELINE: [&str; 7] = ["synth", "metrics", "regress", "psm", "prepost", "mediate", "bin-fit"];

const CONFIG: &str = r#"
seed = 1101
output_dir = "out"

[inputs]
h_index = "out/h_index.tsv"

[synth]
n_papers = 4000
beta_sd = 0.1
treatment_effect = 0.2
a_path = 0.4
b_path = 0.3
h_effect = 0.5
shock_year = 2012
shock_cc_shift = 0.2

[psm]
caliper = 0.05
n_bootstrap = 300

[mediation]
n_bootstrap = 300
"#;

fn run_pipeline(dir: &Path) -> Result<BTreeMap<String, Vec<u8>>, String> {
    std::fs::write(dir.join("teamdiv.toml"), CONFIG).map_err(|e| e.to_string())?;
    for cmd in PIPELINE {
        let out = Command::new(env!("CARGO_BIN_EXE_teamdiv"))
            .current_dir(dir)
            .args(["--config", "teamdiv.toml", "--threads", "1", cmd])
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(
            out.status.success(),
            "{cmd} failed: {}",
            String::from_utf8_lossy(&out.stderr).trim()
        );
    }
    let mut files = BTreeMap::new();
    for e in std::fs::read_dir(dir.join("out")).map_err(|e| e.to_string())? {
        let e = e.map_err(|e| e.to_string())?;
        let name = e.file_name().to_string_lossy().into_owned();
        files.insert(name, std::fs::read(e.path()).map_err(|e| e.to_string())?);
    }
    Ok(files)
}

pub fn determinism() -> Outcome {
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    let fa = run_pipeline(a.path())?;
    let fb = run_pipeline(b.path())?;
    ensure!(
        fa.keys().eq(fb.keys()),
        "file sets differ: {:?} vs {:?}",
        fa.keys().collect::<Vec<_>>(),
        fb.keys().collect::<Vec<_>>()
    );
    for (name, bytes) in &fa {
        ensure!(bytes == &fb[name], "{name} differs between runs");
    }
    ensure!(!fa.keys().any(|k| k.ends_with(".partial")), "partial files left behind");

    let manifest: teamdiv::Manifest =
        serde_json::from_slice(&fa["manifest.json"]).map_err(|e| format!("manifest: {e}"))?;
    let mut referenced = 0;
    for run in &manifest.runs {
        for d in run.outputs.iter().chain(&run.inputs) {
            ensure!(fa.contains_key(&d.path), "manifest names missing file {}", d.path);
            let digest = teamdiv::output::sha256_file(&a.path().join("out").join(&d.path)).map_err(|e| e.to_string())?;
            ensure!(digest == d.sha256, "{} digest does not match the manifest", d.path);
            referenced += 1;
        }
    }
    let ran: Vec<&str> = manifest.runs.iter().map(|r| r.subcommand.as_str()).collect();
    ensure!(ran == PIPELINE, "manifest runs {ran:?}");
    let regress = manifest.run("regress").unwrap();
    let metrics = manifest.run("metrics").unwrap();
    ensure!(regress.upstream == ["metrics"], "regress upstream {:?}", regress.upstream);
    ensure!(metrics.upstream == ["synth"], "metrics upstream {:?}", metrics.upstream);
    Ok(format!(
        "{} files byte-identical across two runs at 1 thread; {referenced} manifest digests verified; chain synth -> metrics -> regress",
        fa.len()
    ))
}
