//! Bibliographic ingest, co-authorship and citation graphs, and the
//! per-paper team, innovation and content metrics.

pub mod content;
pub mod corpus;
pub mod discipline;
pub mod error;
pub mod graph;
pub mod innovation;
pub mod pipeline;
pub mod profiles;
pub mod rows;
pub mod team;

pub use corpus::{
    filter_research_articles, filter_traceable_history, load_corpus, parse_corpus, write_jsonl, ArticleType, AuthorRef,
    Corpus, PaperRecord, Reject, SchemaConfig,
};
pub use discipline::{map_discipline_group, Discipline, DisciplineGroup};
pub use error::{CoreError, Result};
pub use pipeline::{compute_metrics, MetricsOptions, MetricsSummary};
pub use profiles::{build_author_profiles, AuthorProfile, AuthorProfiles, HIndexTable};
pub use rows::{read_rows, rows_to_frame, write_rows, MetricRow};
