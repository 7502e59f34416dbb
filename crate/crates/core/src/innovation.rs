//! CD disruption index, field normalization and disciplinary integration.

use std::collections::HashMap;
use std::hash::Hash;

use serde::Serialize;
use teamdiv_stats::describe::{is_constant, mean, sample_sd};

use crate::discipline::Discipline;
use crate::graph::CitationGraph;

pub const DEFAULT_CD_WINDOW: u32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CdResult {
    /// Missing when nothing in the window cites the focal paper or its references.
    pub cd: Option<f64>,
    pub citers: usize,
    /// The focal paper has no references, so every citer counts as disruptive.
    pub no_references: bool,
}

/// CD index over citers published in years t+1 ..= t+window: the mean of
/// f - 2fb, where f marks citing the focal paper and b citing any of its
/// references.
pub fn cd_index(graph: &CitationGraph, focal: u32, window: u32) -> CdResult {
    let refs = graph.references(focal);
    let Some(t) = graph.year(focal) else {
        return CdResult {
            cd: None,
            citers: 0,
            no_references: refs.is_empty(),
        };
    };
    let (lo, hi) = (t + 1, t + window as i32);
    // (citer, 1) for citing the focal paper, (citer, 2) for citing a reference
    let mut marks: Vec<(u32, u8)> = graph
        .citers_between(focal, lo, hi)
        .iter()
        .map(|&c| (c, 1))
        .collect();
    for &r in refs {
        marks.extend(graph.citers_between(r, lo, hi).iter().map(|&c| (c, 2u8)));
    }
    marks.sort_unstable();
    let mut citers = 0usize;
    let mut numerator = 0i64;
    let mut i = 0;
    while i < marks.len() {
        let c = marks[i].0;
        let mut flags = 0u8;
        while i < marks.len() && marks[i].0 == c {
            flags |= marks[i].1;
            i += 1;
        }
        if c == focal {
            continue;
        }
        citers += 1;
        let (f, b) = (i64::from(flags & 1), i64::from(flags >> 1));
        numerator += f - 2 * f * b;
    }
    CdResult {
        cd: (citers > 0).then(|| numerator as f64 / citers as f64),
        citers,
        no_references: refs.is_empty(),
    }
}

/// z-scores within each key group. Missing inputs stay missing and do not
/// count toward the group; groups with fewer than two values or no spread
/// come out missing.
pub fn field_normalize<K: Hash + Eq>(values: &[Option<f64>], keys: &[K]) -> Vec<Option<f64>> {
    assert_eq!(values.len(), keys.len(), "one key per value");
    let mut groups: HashMap<&K, Vec<usize>> = HashMap::new();
    for (i, (v, k)) in values.iter().zip(keys).enumerate() {
        if v.is_some() {
            groups.entry(k).or_default().push(i);
        }
    }
    let mut out = vec![None; values.len()];
    for members in groups.values() {
        let vals: Vec<f64> = members.iter().map(|&i| values[i].unwrap()).collect();
        if vals.len() < 2 || is_constant(&vals) {
            continue;
        }
        let (m, sd) = (mean(&vals), sample_sd(&vals));
        for (&i, v) in members.iter().zip(&vals) {
            out[i] = Some((v - m) / sd);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiResult {
    pub di: Option<f64>,
    pub known_refs: usize,
    pub unknown_refs: usize,
}

/// Simpson diversity 1 - sum p_i^2 of a proportion vector.
pub fn simpson_index(proportions: &[f64]) -> f64 {
    1.0 - proportions.iter().map(|p| p * p).sum::<f64>()
}

pub fn disciplinary_integration(reference_disciplines: &[Option<Discipline>]) -> DiResult {
    let mut counts = [0u64; 19];
    let mut known = 0usize;
    for d in reference_disciplines.iter().flatten() {
        counts[d.index()] += 1;
        known += 1;
    }
    let di = (known > 0).then(|| {
        let sq: u64 = counts.iter().map(|c| c * c).sum();
        1.0 - sq as f64 / (known as f64 * known as f64)
    });
    DiResult {
        di,
        known_refs: known,
        unknown_refs: reference_disciplines.len() - known,
    }
}

/// DI of a paper from the disciplines of its in-corpus references.
pub fn paper_di(graph: &CitationGraph, focal: u32) -> DiResult {
    let ds: Vec<Option<Discipline>> = graph
        .references(focal)
        .iter()
        .map(|&r| graph.discipline(r))
        .collect();
    disciplinary_integration(&ds)
}
