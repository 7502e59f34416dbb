//! The per-paper metric table and its CSV form.
//!
//! The file starts with one `#` line naming the schema version and the hash
//! of the configuration that produced it, followed by a header row. Missing
//! values are empty fields.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use teamdiv_stats::Frame;

use crate::error::{CoreError, Result};

pub const SCHEMA_VERSION: &str = "metric_rows/v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub paper_id: String,
    pub year: i32,
    pub discipline: String,
    pub discipline_group: String,
    pub nsf_funded: u8,
    pub team_size: usize,
    pub log_team_size: f64,
    pub cc_count: usize,
    pub sd: f64,
    pub sd_std: Option<f64>,
    pub freshness: f64,
    pub edge_density: Option<f64>,
    pub clustering: Option<f64>,
    pub cd_raw: Option<f64>,
    pub cd_norm: Option<f64>,
    pub forward_citer_count: usize,
    pub cd_no_refs: u8,
    pub di: Option<f64>,
    pub di_known_refs: usize,
    pub di_unknown_refs: usize,
    pub career_age: f64,
    pub career_age_sq: f64,
    pub inst_h_index: f64,
    pub inst_h_missing: u8,
    pub pub_count: u32,
    pub log_pub_count: f64,
    pub title_word_count: usize,
    pub flesch: Option<f64>,
    pub promo_pct: Option<f64>,
}

pub const COLUMNS: [&str; 29] = [
    "paper_id",
    "year",
    "discipline",
    "discipline_group",
    "nsf_funded",
    "team_size",
    "log_team_size",
    "cc_count",
    "sd",
    "sd_std",
    "freshness",
    "edge_density",
    "clustering",
    "cd_raw",
    "cd_norm",
    "forward_citer_count",
    "cd_no_refs",
    "di",
    "di_known_refs",
    "di_unknown_refs",
    "career_age",
    "career_age_sq",
    "inst_h_index",
    "inst_h_missing",
    "pub_count",
    "log_pub_count",
    "title_word_count",
    "flesch",
    "promo_pct",
];

pub fn write_rows<W: Write>(rows: &[MetricRow], config_hash: &str, mut out: W) -> Result<()> {
    writeln!(out, "# {SCHEMA_VERSION} config={config_hash}")?;
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    if rows.is_empty() {
        w.write_record(COLUMNS)?;
    }
    w.flush()?;
    Ok(())
}

/// Returns the rows and the config hash named in the leading comment.
pub fn read_rows<R: Read>(input: R) -> Result<(Vec<MetricRow>, String)> {
    let mut text = String::new();
    let mut input = input;
    input.read_to_string(&mut text)?;
    let (first, rest) = text.split_once('\n').unwrap_or((text.as_str(), ""));
    let meta = first
        .strip_prefix("# ")
        .ok_or_else(|| CoreError::Table("missing '#' schema line".into()))?;
    let mut parts = meta.split_whitespace();
    if parts.next() != Some(SCHEMA_VERSION) {
        return Err(CoreError::Table(format!("unsupported schema line '{first}'")));
    }
    let hash = parts
        .find_map(|p| p.strip_prefix("config="))
        .unwrap_or_default()
        .to_string();
    let mut reader = csv::Reader::from_reader(rest.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header != COLUMNS {
        return Err(CoreError::Table("column layout does not match the schema".into()));
    }
    let rows = reader.deserialize().collect::<std::result::Result<Vec<MetricRow>, _>>()?;
    Ok((rows, hash))
}

/// Numeric columns by name, with categorical keys `year`, `discipline`,
/// `discipline_group` and `nsf_funded` for fixed effects and subsetting.
pub fn rows_to_frame(rows: &[MetricRow]) -> Frame {
    let n = rows.len();
    let mut f = Frame::new(n);
    let mut num = |name: &str, get: &dyn Fn(&MetricRow) -> Option<f64>| {
        f.insert_numeric(name, rows.iter().map(get).collect()).expect("length matches");
    };
    num("year", &|r| Some(r.year as f64));
    num("nsf_funded", &|r| Some(r.nsf_funded as f64));
    num("team_size", &|r| Some(r.team_size as f64));
    num("log_team_size", &|r| Some(r.log_team_size));
    num("cc_count", &|r| Some(r.cc_count as f64));
    num("sd", &|r| Some(r.sd));
    num("sd_std", &|r| r.sd_std);
    num("freshness", &|r| Some(r.freshness));
    num("edge_density", &|r| r.edge_density);
    num("clustering", &|r| r.clustering);
    num("cd_raw", &|r| r.cd_raw);
    num("cd_norm", &|r| r.cd_norm);
    num("forward_citer_count", &|r| Some(r.forward_citer_count as f64));
    num("di", &|r| r.di);
    num("career_age", &|r| Some(r.career_age));
    num("career_age_sq", &|r| Some(r.career_age_sq));
    num("inst_h_index", &|r| Some(r.inst_h_index));
    num("inst_h_missing", &|r| Some(r.inst_h_missing as f64));
    num("pub_count", &|r| Some(r.pub_count as f64));
    num("log_pub_count", &|r| Some(r.log_pub_count));
    num("title_word_count", &|r| Some(r.title_word_count as f64));
    num("flesch", &|r| r.flesch);
    num("promo_pct", &|r| r.promo_pct);
    let cat = |get: &dyn Fn(&MetricRow) -> String| rows.iter().map(|r| Some(get(r))).collect::<Vec<_>>();
    f.insert_categorical("year", cat(&|r| r.year.to_string())).unwrap();
    f.insert_categorical("discipline", cat(&|r| r.discipline.clone())).unwrap();
    f.insert_categorical("discipline_group", cat(&|r| r.discipline_group.clone())).unwrap();
    f.insert_categorical("nsf_funded", cat(&|r| r.nsf_funded.to_string())).unwrap();
    f
}
