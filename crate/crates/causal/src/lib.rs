//! Causal designs on metric tables: propensity-score matching with balance
//! diagnostics, decile sweeps, pre-post comparisons and mediation.

pub mod att;
pub mod balance;
pub mod error;
pub mod groups;
pub mod matching;
pub mod mediation;
pub mod prepost;
pub mod propensity;
pub mod psm;

pub use att::{att_estimate, Att};
pub use balance::{smd, BalanceRow};
pub use error::{CausalError, Result};
pub use groups::{quantile_groups, QuantileGroups};
pub use matching::{nn_match, Matching, Pair};
pub use mediation::{mediation_analysis, MediationConfig, MediationResult, PathEstimate};
pub use prepost::{prepost_report, PeriodRow, PeriodSummary, PrePostConfig, PrePostReport};
pub use propensity::{propensity_scores, PropensityScores};
pub use psm::{
    psm_between, psm_decile_sweep, psm_quartile, DecileContrast, MatchReport, MatchedPair, PsmConfig, DEFAULT_COVARIATES,
};
