use std::path::PathBuf;

use teamdiv_stats::StatsError;

#[derive(Debug, thiserror::Error)]
pub enum CoreError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Stream(#[from] std::io::Error),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("unknown discipline '{label}'; valid labels: {valid}")]
    UnknownDiscipline { label: String, valid: String },
    #[error("conflicting h-index rows for institution '{0}'")]
    HIndexConflict(String),
    #[error("malformed h-index row {line}: {reason}")]
    HIndexRow { line: usize, reason: String },
    #[error("window of {0} years is outside the supported range 2..=7")]
    WindowOutOfRange(u32),
    #[error("empty team")]
    EmptyTeam,
    #[error("bad snapshot: {0}")]
    Snapshot(String),
    #[error("metric table: {0}")]
    Table(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Stats(#[from] StatsError),
}

pub type Result<T, E = CoreError> = std::result::Result<T, E>;

pub(crate) fn io_at(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> CoreError + '_ {
    move |source| CoreError::Io {
        path: path.to_path_buf(),
        source,
    }
}
