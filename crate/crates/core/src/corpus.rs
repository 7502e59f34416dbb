//! JSON Lines ingest with a configurable field mapping, record validation,
//! and the two sample filters.

use std::collections::{BTreeMap, HashSet};
use std::io::{BufRead, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::discipline::Discipline;
use crate::error::{io_at, CoreError, Result};
use crate::profiles::AuthorProfiles;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorRef {
    #[serde(rename = "id")]
    pub author_id: String,
    #[serde(rename = "institution", default, skip_serializing_if = "Option::is_none")]
    pub institution_id: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArticleType {
    ResearchArticle,
    Review,
    Editorial,
    Other,
}

impl ArticleType {
    /// Maps the usual source spellings ("article", "journal-article",
    /// "Research Article", ...) onto the four kinds.
    pub fn from_source(raw: &str) -> Self {
        let norm: String = raw
            .trim()
            .chars()
            .map(|c| if c == '-' || c == ' ' { '_' } else { c.to_ascii_lowercase() })
            .collect();
        match norm.as_str() {
            "research_article" | "article" | "journal_article" | "research" | "original_article" => {
                Self::ResearchArticle
            }
            "review" | "review_article" => Self::Review,
            "editorial" => Self::Editorial,
            _ => Self::Other,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaperRecord {
    #[serde(rename = "id")]
    pub paper_id: String,
    pub title: String,
    pub year: i32,
    pub discipline: Discipline,
    pub authors: Vec<AuthorRef>,
    pub references: Vec<String>,
    pub article_type: ArticleType,
    pub nsf_funded: bool,
}

impl PaperRecord {
    pub fn last_author(&self) -> &AuthorRef {
        self.authors.last().expect("records always carry authors")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reject {
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IngestWarnings {
    pub missing_article_type: usize,
    pub self_citations_removed: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    pub records: Vec<PaperRecord>,
    pub rejects: Vec<Reject>,
    pub warnings: IngestWarnings,
}

impl Corpus {
    pub fn from_records(records: Vec<PaperRecord>) -> Self {
        Self {
            records,
            ..Self::default()
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Where each field lives in a source record. Paths are dot separated and
/// may contain array indices, e.g. `primary_topic.field.display_name` or
/// `authorships.0.institutions.0.id`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SchemaConfig {
    pub id: String,
    pub title: String,
    pub year: String,
    pub discipline: String,
    pub authors: String,
    /// Path inside one author entry; ignored when entries are plain strings.
    pub author_id: String,
    pub institution: String,
    pub references: String,
    /// Path inside one reference entry; empty when entries are plain strings.
    pub reference_id: String,
    pub article_type: String,
    pub nsf_funded: String,
    pub min_year: i32,
    pub max_year: i32,
}

impl Default for SchemaConfig {
    fn default() -> Self {
        Self {
            id: "id".into(),
            title: "title".into(),
            year: "year".into(),
            discipline: "discipline".into(),
            authors: "authors".into(),
            author_id: "id".into(),
            institution: "institution".into(),
            references: "references".into(),
            reference_id: String::new(),
            article_type: "article_type".into(),
            nsf_funded: "nsf_funded".into(),
            min_year: 1900,
            max_year: 2025,
        }
    }
}

impl SchemaConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| CoreError::Config(e.to_string()))?;
        if cfg.min_year > cfg.max_year {
            return Err(CoreError::Config(format!(
                "min_year {} exceeds max_year {}",
                cfg.min_year, cfg.max_year
            )));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path).map_err(io_at(path))?)
    }
}

fn lookup<'a>(value: &'a Value, path: &str) -> Option<&'a Value> {
    if path.is_empty() {
        return Some(value);
    }
    path.split('.').try_fold(value, |v, key| match v {
        Value::Object(map) => map.get(key),
        Value::Array(items) => key.parse::<usize>().ok().and_then(|i| items.get(i)),
        _ => None,
    })
}

fn present<'a>(value: &'a Value, path: &str) -> Option<&'a Value> {
    lookup(value, path).filter(|v| !v.is_null())
}

fn as_id(value: &Value) -> Option<String> {
    match value {
        Value::String(s) if !s.trim().is_empty() => Some(s.trim().to_string()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

fn as_year(value: &Value) -> Option<i64> {
    match value {
        Value::Number(n) => n.as_i64(),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

struct Parsed {
    record: PaperRecord,
    missing_type: bool,
    self_citations: usize,
}

fn parse_record(line: &str, cfg: &SchemaConfig) -> std::result::Result<Parsed, String> {
    let value: Value = serde_json::from_str(line).map_err(|e| format!("malformed JSON: {e}"))?;
    if !value.is_object() {
        return Err("malformed record: not a JSON object".into());
    }
    let paper_id = present(&value, &cfg.id)
        .and_then(as_id)
        .ok_or_else(|| format!("missing field '{}'", cfg.id))?;
    let year = present(&value, &cfg.year).ok_or_else(|| format!("missing field '{}'", cfg.year))?;
    let year = as_year(year).ok_or_else(|| format!("field '{}' is not an integer year", cfg.year))?;
    if year < cfg.min_year as i64 || year > cfg.max_year as i64 {
        return Err(format!("year {year} outside {}..={}", cfg.min_year, cfg.max_year));
    }
    let authors_raw = present(&value, &cfg.authors)
        .ok_or_else(|| format!("missing field '{}'", cfg.authors))?
        .as_array()
        .ok_or_else(|| format!("field '{}' is not a list", cfg.authors))?;
    if authors_raw.is_empty() {
        return Err(format!("field '{}' is empty", cfg.authors));
    }
    let mut authors = Vec::with_capacity(authors_raw.len());
    let mut seen = HashSet::with_capacity(authors_raw.len());
    for entry in authors_raw {
        let author = match entry {
            Value::Object(_) => AuthorRef {
                author_id: present(entry, &cfg.author_id)
                    .and_then(as_id)
                    .ok_or_else(|| format!("author entry without '{}'", cfg.author_id))?,
                institution_id: present(entry, &cfg.institution).and_then(as_id),
            },
            other => AuthorRef {
                author_id: as_id(other).ok_or("author entry is neither an id nor an object")?,
                institution_id: None,
            },
        };
        if !seen.insert(author.author_id.clone()) {
            return Err(format!("duplicate author id '{}'", author.author_id));
        }
        authors.push(author);
    }
    let discipline = present(&value, &cfg.discipline)
        .ok_or_else(|| format!("missing field '{}'", cfg.discipline))?
        .as_str()
        .ok_or_else(|| format!("field '{}' is not a string", cfg.discipline))?
        .parse::<Discipline>()
        .map_err(|_| {
            format!(
                "unknown discipline '{}'",
                lookup(&value, &cfg.discipline).and_then(Value::as_str).unwrap_or_default()
            )
        })?;
    let title = present(&value, &cfg.title)
        .and_then(Value::as_str)
        .unwrap_or_default()
        .to_string();
    let mut references = Vec::new();
    let mut self_citations = 0;
    if let Some(refs) = present(&value, &cfg.references) {
        let refs = refs
            .as_array()
            .ok_or_else(|| format!("field '{}' is not a list", cfg.references))?;
        for r in refs {
            let id = present(r, &cfg.reference_id)
                .and_then(as_id)
                .ok_or("reference entry without an id")?;
            if id == paper_id {
                self_citations += 1;
            } else {
                references.push(id);
            }
        }
    }
    let (article_type, missing_type) = match present(&value, &cfg.article_type).and_then(Value::as_str) {
        Some(raw) => (ArticleType::from_source(raw), false),
        None => (ArticleType::ResearchArticle, true),
    };
    let nsf_funded = match present(&value, &cfg.nsf_funded) {
        None => false,
        Some(Value::Bool(b)) => *b,
        Some(Value::Number(n)) => n.as_i64() == Some(1),
        Some(_) => return Err(format!("field '{}' is not a boolean", cfg.nsf_funded)),
    };
    Ok(Parsed {
        record: PaperRecord {
            paper_id,
            title,
            year: year as i32,
            discipline,
            authors,
            references,
            article_type,
            nsf_funded,
        },
        missing_type,
        self_citations,
    })
}

/// Parses one JSON object per line. Bad lines go to `rejects` with their
/// 1-based line number; blank lines are skipped. Output order follows input
/// order regardless of thread count.
pub fn parse_corpus<R: BufRead>(input: R, cfg: &SchemaConfig) -> Result<Corpus> {
    let lines: Vec<String> = input.lines().collect::<std::io::Result<_>>()?;
    let parsed: Vec<(usize, std::result::Result<Parsed, String>)> = lines
        .par_iter()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| (i + 1, parse_record(l, cfg)))
        .collect();
    let mut corpus = Corpus::default();
    let mut ids = HashSet::new();
    for (line, outcome) in parsed {
        match outcome {
            Ok(p) if !ids.insert(p.record.paper_id.clone()) => corpus.rejects.push(Reject {
                line,
                reason: format!("duplicate paper id '{}'", p.record.paper_id),
            }),
            Ok(p) => {
                corpus.warnings.missing_article_type += usize::from(p.missing_type);
                corpus.warnings.self_citations_removed += p.self_citations;
                corpus.records.push(p.record);
            }
            Err(reason) => corpus.rejects.push(Reject { line, reason }),
        }
    }
    Ok(corpus)
}

pub fn load_corpus(path: &Path, cfg: &SchemaConfig) -> Result<Corpus> {
    let file = std::fs::File::open(path).map_err(io_at(path))?;
    parse_corpus(std::io::BufReader::new(file), cfg)
}

/// Writes records in the canonical layout that `SchemaConfig::default` reads.
pub fn write_jsonl<W: Write>(records: &[PaperRecord], mut out: W) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn write_rejects_tsv<W: Write>(rejects: &[Reject], mut out: W) -> Result<()> {
    writeln!(out, "line\treason")?;
    for r in rejects {
        let reason = r.reason.replace(['\t', '\n'], " ");
        writeln!(out, "{}\t{}", r.line, reason)?;
    }
    Ok(())
}

pub fn is_research_article(record: &PaperRecord) -> bool {
    record.article_type == ArticleType::ResearchArticle
}

pub fn filter_research_articles(mut corpus: Corpus) -> Corpus {
    corpus.records.retain(is_research_article);
    corpus
}

pub fn check_window(window_years: u32) -> Result<()> {
    if (2..=7).contains(&window_years) {
        Ok(())
    } else {
        Err(CoreError::WindowOutOfRange(window_years))
    }
}

/// True when every author has at least one publication in [t - window, t - 1].
pub fn is_traceable(record: &PaperRecord, profiles: &AuthorProfiles, window_years: u32) -> bool {
    let t = record.year;
    record.authors.iter().all(|a| {
        profiles
            .get(&a.author_id)
            .is_some_and(|p| p.count_between(t - window_years as i32, t - 1) >= 1)
    })
}

pub fn filter_traceable_history(mut corpus: Corpus, profiles: &AuthorProfiles, window_years: u32) -> Result<Corpus> {
    check_window(window_years)?;
    corpus.records.retain(|r| is_traceable(r, profiles, window_years));
    Ok(corpus)
}

/// Counts of records per article type, for run summaries.
pub fn article_type_counts(records: &[PaperRecord]) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for r in records {
        let key = serde_json::to_value(r.article_type)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default();
        *out.entry(key).or_insert(0) += 1;
    }
    out
}
