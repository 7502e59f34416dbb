use teamdiv_stats::StatsError;

#[derive(Debug, thiserror::Error)]
pub enum CausalError {
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("need at least {needed} rows to form {needed} groups, got {got}")]
    TooFewForGroups { needed: usize, got: usize },
    #[error("control pool is empty")]
    EmptyControls,
    #[error("no matched pairs")]
    NoPairs,
    #[error("period {0} has no rows")]
    EmptyPeriod(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = CausalError> = std::result::Result<T, E>;
