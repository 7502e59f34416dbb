//! Corpus to metric table.
//!
//! Graphs and author profiles are built from every parsed record; the
//! analysis sample is the research articles whose authors all have traceable
//! history. CD is field-normalized and SD standardized over that sample.

use rayon::prelude::*;
use serde::Serialize;

use crate::content::{flesch_reading_ease, promotional_fraction, title_word_count, Lexicon};
use crate::corpus::{check_window, is_research_article, is_traceable, Corpus, PaperRecord};
use crate::error::Result;
use crate::graph::{build_citation_graph, build_collab_graph, CitationGraph, CollabGraph, DEFAULT_TEAM_SIZE_CAP};
use crate::innovation::{cd_index, field_normalize, paper_di, DEFAULT_CD_WINDOW};
use crate::profiles::{build_author_profiles, AuthorProfiles, HIndexTable};
use crate::rows::MetricRow;
use crate::team::{standardize_sd, team_structure};

#[derive(Debug, Clone)]
pub struct MetricsOptions {
    pub window_years: u32,
    pub cd_window: u32,
    pub team_size_cap: usize,
    pub lexicon: Lexicon,
    pub h_index: Option<HIndexTable>,
}

impl Default for MetricsOptions {
    fn default() -> Self {
        Self {
            window_years: 5,
            cd_window: DEFAULT_CD_WINDOW,
            team_size_cap: DEFAULT_TEAM_SIZE_CAP,
            lexicon: Lexicon::builtin(),
            h_index: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct MetricsSummary {
    pub records: usize,
    pub rejects: usize,
    pub missing_article_type: usize,
    pub self_citations_removed: usize,
    pub research_articles: usize,
    pub analysis_rows: usize,
    pub cd_missing: usize,
    pub cd_norm_missing: usize,
    pub di_missing: usize,
    pub no_reference_papers: usize,
    pub citation_year_anomalies: usize,
    pub dangling_reference_nodes: usize,
    pub hyper_authorship_skipped: usize,
    pub h_index_missing: usize,
}

pub struct BuiltGraphs {
    pub profiles: AuthorProfiles,
    pub collab: CollabGraph,
    pub citation: CitationGraph,
}

pub fn build_graphs(records: &[PaperRecord], opts: &MetricsOptions) -> BuiltGraphs {
    let (profiles, (collab, citation)) = rayon::join(
        || build_author_profiles(records, opts.h_index.as_ref()),
        || {
            rayon::join(
                || build_collab_graph(records, opts.team_size_cap),
                || build_citation_graph(records),
            )
        },
    );
    BuiltGraphs {
        profiles,
        collab,
        citation,
    }
}

fn paper_row(r: &PaperRecord, g: &BuiltGraphs, opts: &MetricsOptions) -> Result<MetricRow> {
    let team: Vec<&str> = r.authors.iter().map(|a| a.author_id.as_str()).collect();
    let prior = g.collab.prior_subnetwork(&team, r.year, opts.window_years);
    let ts = team_structure(&prior)?;
    let node = g.citation.node(&r.paper_id).expect("every record is a node");
    let cd = cd_index(&g.citation, node, opts.cd_window);
    let di = paper_di(&g.citation, node);

    let last = r.last_author();
    let profile = &g.profiles[&last.author_id];
    let h = last
        .institution_id
        .as_deref()
        .or(profile.institution_id.as_deref())
        .and_then(|i| opts.h_index.as_ref().and_then(|t| t.get(i)));
    let career_age = profile.career_age(r.year) as f64;
    let pub_count = profile.cumulative_through(r.year);
    Ok(MetricRow {
        paper_id: r.paper_id.clone(),
        year: r.year,
        discipline: r.discipline.label().to_string(),
        discipline_group: r.discipline.group().label().to_string(),
        nsf_funded: u8::from(r.nsf_funded),
        team_size: ts.team_size,
        log_team_size: (ts.team_size as f64).ln(),
        cc_count: ts.cc_count,
        sd: ts.sd,
        sd_std: None,
        freshness: ts.freshness,
        edge_density: ts.edge_density,
        clustering: ts.clustering,
        cd_raw: cd.cd,
        cd_norm: None,
        forward_citer_count: cd.citers,
        cd_no_refs: u8::from(cd.no_references),
        di: di.di,
        di_known_refs: di.known_refs,
        di_unknown_refs: di.unknown_refs,
        career_age,
        career_age_sq: career_age * career_age,
        inst_h_index: h.unwrap_or(0) as f64,
        inst_h_missing: u8::from(h.is_none()),
        pub_count,
        log_pub_count: (pub_count as f64).ln_1p(),
        title_word_count: title_word_count(&r.title),
        flesch: flesch_reading_ease(&r.title),
        promo_pct: promotional_fraction(&r.title, &opts.lexicon),
    })
}

pub fn compute_metrics(corpus: &Corpus, opts: &MetricsOptions) -> Result<(Vec<MetricRow>, MetricsSummary)> {
    check_window(opts.window_years)?;
    let graphs = build_graphs(&corpus.records, opts);
    compute_metrics_with(corpus, &graphs, opts)
}

pub fn compute_metrics_with(
    corpus: &Corpus,
    graphs: &BuiltGraphs,
    opts: &MetricsOptions,
) -> Result<(Vec<MetricRow>, MetricsSummary)> {
    check_window(opts.window_years)?;
    let sample: Vec<&PaperRecord> = corpus
        .records
        .iter()
        .filter(|r| is_research_article(r) && is_traceable(r, &graphs.profiles, opts.window_years))
        .collect();
    let mut rows = sample
        .par_iter()
        .map(|r| paper_row(r, graphs, opts))
        .collect::<Result<Vec<_>>>()?;

    let keys: Vec<(i32, &str)> = sample.iter().map(|r| (r.year, r.discipline.label())).collect();
    let raw: Vec<Option<f64>> = rows.iter().map(|r| r.cd_raw).collect();
    for (row, z) in rows.iter_mut().zip(field_normalize(&raw, &keys)) {
        row.cd_norm = z;
    }
    if !rows.is_empty() {
        let sd: Vec<f64> = rows.iter().map(|r| r.sd).collect();
        for (row, z) in rows.iter_mut().zip(standardize_sd(&sd)?) {
            row.sd_std = Some(z);
        }
    }

    let summary = MetricsSummary {
        records: corpus.records.len(),
        rejects: corpus.rejects.len(),
        missing_article_type: corpus.warnings.missing_article_type,
        self_citations_removed: corpus.warnings.self_citations_removed,
        research_articles: corpus.records.iter().filter(|r| is_research_article(r)).count(),
        analysis_rows: rows.len(),
        cd_missing: rows.iter().filter(|r| r.cd_raw.is_none()).count(),
        cd_norm_missing: rows.iter().filter(|r| r.cd_norm.is_none()).count(),
        di_missing: rows.iter().filter(|r| r.di.is_none()).count(),
        no_reference_papers: rows.iter().filter(|r| r.cd_no_refs == 1).count(),
        citation_year_anomalies: graphs.citation.year_anomalies(),
        dangling_reference_nodes: graphs.citation.dangling_count(),
        hyper_authorship_skipped: graphs.collab.skipped_papers().len(),
        h_index_missing: rows.iter().filter(|r| r.inst_h_missing == 1).count(),
    };
    Ok((rows, summary))
}
