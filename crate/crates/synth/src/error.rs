#[derive(Debug, thiserror::Error)]
pub enum SynthError {
    #[error("invalid synth config: {0}")]
    Config(String),
    #[error("infeasible synth config: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Core(#[from] teamdiv_core::CoreError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = SynthError> = std::result::Result<T, E>;
