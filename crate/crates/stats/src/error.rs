use thiserror::Error;

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("column `{0}` not found")]
    MissingColumn(String),
    #[error("column `{name}` has {got} rows, frame has {expected}")]
    LengthMismatch {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("duplicate or collinear terms: {}", .0.join(", "))]
    DuplicateTerms(Vec<String>),
    #[error("design matrix is rank deficient; dependent columns: {}", .0.join(", "))]
    RankDeficient(Vec<String>),
    #[error("not enough observations: need more than {needed}, have {got}")]
    TooFewObservations { needed: usize, got: usize },
    #[error("zero variance in {0}")]
    ZeroVariance(String),
    #[error("variable `{0}` is not a term of the fitted model")]
    UnknownTerm(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = StatsError> = std::result::Result<T, E>;
