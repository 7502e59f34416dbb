//! Model specifications and their expansion into a numeric design matrix.
//!
//! Rows with any missing value among the used columns are dropped (listwise
//! deletion). Each fixed-effect key is expanded into indicator columns for
//! every level except the first one in sorted order, which is the reference.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Result, StatsError};
use crate::frame::Frame;

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub outcome: String,
    #[serde(default)]
    pub predictors: Vec<String>,
    /// Pairs of numeric columns whose elementwise product enters the model.
    #[serde(default)]
    pub interactions: Vec<[String; 2]>,
    #[serde(default)]
    pub fixed_effects: Vec<String>,
    #[serde(default = "yes")]
    pub intercept: bool,
}

impl ModelSpec {
    pub fn new(outcome: &str, predictors: &[&str]) -> Self {
        Self {
            outcome: outcome.to_string(),
            predictors: predictors.iter().map(|s| s.to_string()).collect(),
            interactions: Vec::new(),
            fixed_effects: Vec::new(),
            intercept: true,
        }
    }

    pub fn interaction(mut self, a: &str, b: &str) -> Self {
        self.interactions.push([a.to_string(), b.to_string()]);
        self
    }

    pub fn fixed_effect(mut self, key: &str) -> Self {
        self.fixed_effects.push(key.to_string());
        self
    }

    /// Every numeric column the model reads, outcome first.
    pub fn numeric_columns(&self) -> Vec<&str> {
        let mut cols = vec![self.outcome.as_str()];
        for p in &self.predictors {
            cols.push(p);
        }
        for [a, b] in &self.interactions {
            cols.push(a);
            cols.push(b);
        }
        let mut seen = BTreeSet::new();
        cols.retain(|c| seen.insert(*c));
        cols
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Term {
    Intercept,
    Numeric(String),
    Interaction(String, String),
    Dummy { key: String, level: String },
}

impl Term {
    pub fn name(&self) -> String {
        match self {
            Term::Intercept => "(intercept)".to_string(),
            Term::Numeric(n) => n.clone(),
            Term::Interaction(a, b) => format!("{a}:{b}"),
            Term::Dummy { key, level } => format!("{key}[{level}]"),
        }
    }

    fn canonical(&self) -> String {
        match self {
            Term::Interaction(a, b) if b < a => format!("{b}:{a}"),
            other => other.name(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedEffectSummary {
    pub key: String,
    pub levels: usize,
    pub reference: String,
}

#[derive(Debug, Clone)]
pub struct Design {
    pub outcome: String,
    pub x: DMatrix<f64>,
    pub y: DVector<f64>,
    pub terms: Vec<Term>,
    /// Frame row index of every design row.
    pub rows: Vec<usize>,
    pub dropped_rows: usize,
    pub fixed_effects: Vec<FixedEffectSummary>,
    pub warnings: Vec<String>,
}

impl Design {
    pub fn term_names(&self) -> Vec<String> {
        self.terms.iter().map(Term::name).collect()
    }

    pub fn n_obs(&self) -> usize {
        self.x.nrows()
    }
}

/// Sorts level labels numerically when all of them parse as numbers.
fn sort_levels(levels: BTreeSet<String>) -> Vec<String> {
    let mut v: Vec<String> = levels.into_iter().collect();
    if v.iter().all(|s| s.parse::<f64>().is_ok()) {
        v.sort_by(|a, b| {
            a.parse::<f64>()
                .unwrap()
                .total_cmp(&b.parse::<f64>().unwrap())
        });
    }
    v
}

pub fn build_design(frame: &Frame, spec: &ModelSpec) -> Result<Design> {
    let mut terms = Vec::new();
    if spec.intercept {
        terms.push(Term::Intercept);
    }
    terms.extend(spec.predictors.iter().map(|p| Term::Numeric(p.clone())));
    terms.extend(
        spec.interactions
            .iter()
            .map(|[a, b]| Term::Interaction(a.clone(), b.clone())),
    );
    let mut seen = BTreeMap::new();
    let mut dups = Vec::new();
    for t in &terms {
        if seen.insert(t.canonical(), ()).is_some() {
            dups.push(t.name());
        }
    }
    if !dups.is_empty() {
        return Err(StatsError::DuplicateTerms(dups));
    }
    if spec.outcome.is_empty() {
        return Err(StatsError::InvalidInput("model has no outcome".into()));
    }

    let numeric_names = spec.numeric_columns();
    let numeric = numeric_names
        .iter()
        .map(|n| frame.numeric(n).map(|c| (*n, c)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let keys = spec
        .fixed_effects
        .iter()
        .map(|k| frame.categorical(k))
        .collect::<Result<Vec<_>>>()?;

    let rows: Vec<usize> = (0..frame.len())
        .filter(|&i| {
            numeric.values().all(|c| c[i].is_some_and(f64::is_finite))
                && keys.iter().all(|k| k[i].is_some())
        })
        .collect();
    let dropped_rows = frame.len() - rows.len();

    let mut warnings = Vec::new();
    let mut fixed_effects = Vec::new();
    for (ki, (key, col)) in spec.fixed_effects.iter().zip(&keys).enumerate() {
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for &i in &rows {
            *counts.entry(col[i].as_deref().unwrap()).or_default() += 1;
        }
        let levels = sort_levels(counts.keys().map(|s| s.to_string()).collect());
        for (lvl, c) in &counts {
            if *c < 2 {
                warnings.push(format!("fixed effect {key} level {lvl} has {c} row"));
            }
        }
        let drop_reference = spec.intercept || ki > 0;
        let skip = usize::from(drop_reference);
        if let Some(reference) = levels.first() {
            fixed_effects.push(FixedEffectSummary {
                key: key.clone(),
                levels: levels.len(),
                reference: if drop_reference {
                    reference.clone()
                } else {
                    String::new()
                },
            });
        }
        terms.extend(levels.into_iter().skip(skip).map(|level| Term::Dummy {
            key: key.clone(),
            level,
        }));
    }

    let n = rows.len();
    let p = terms.len();
    let value = |name: &str, i: usize| numeric[name][i].unwrap();
    let key_index: BTreeMap<&str, usize> = spec
        .fixed_effects
        .iter()
        .enumerate()
        .map(|(i, k)| (k.as_str(), i))
        .collect();
    let mut x = DMatrix::<f64>::zeros(n, p);
    for (j, term) in terms.iter().enumerate() {
        for (r, &i) in rows.iter().enumerate() {
            x[(r, j)] = match term {
                Term::Intercept => 1.0,
                Term::Numeric(name) => value(name, i),
                Term::Interaction(a, b) => value(a, i) * value(b, i),
                Term::Dummy { key, level } => {
                    let col = keys[key_index[key.as_str()]];
                    f64::from(col[i].as_deref() == Some(level.as_str()))
                }
            };
        }
    }
    // identical non-dummy columns are collinear duplicates under different names
    let mut identical = Vec::new();
    for a in 0..p {
        if matches!(terms[a], Term::Dummy { .. }) {
            continue;
        }
        for b in (a + 1)..p {
            if matches!(terms[b], Term::Dummy { .. }) {
                continue;
            }
            if n > 0 && x.column(a) == x.column(b) {
                identical.push(format!("{} = {}", terms[a].name(), terms[b].name()));
            }
        }
    }
    if !identical.is_empty() {
        return Err(StatsError::DuplicateTerms(identical));
    }
    let y = DVector::from_iterator(n, rows.iter().map(|&i| value(&spec.outcome, i)));
    Ok(Design {
        outcome: spec.outcome.clone(),
        x,
        y,
        terms,
        rows,
        dropped_rows,
        fixed_effects,
        warnings,
    })
}
