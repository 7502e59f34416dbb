//! Statistical routines: data frames, OLS with fixed effects, margins,
//! rank correlation, two-sample tests, logistic regression, KDE and binned fits.

pub mod binned;
pub mod describe;
pub mod design;
pub mod dist;
pub mod error;
pub mod frame;
pub mod hypothesis;
pub mod kde;
pub mod logistic;
pub mod margins;
pub mod ols;
pub mod rank;

pub use binned::{binned_means_fit, Bin, BinnedFit};
pub use design::{build_design, Design, FixedEffectSummary, ModelSpec, Term};
pub use error::{Result, StatsError};
pub use frame::Frame;
pub use hypothesis::{mann_whitney_u, t_test_independent, t_test_one_sample, MannWhitney, TTest};
pub use kde::{gaussian_kde, silverman_bandwidth, Density};
pub use logistic::{logistic_fit, sigmoid, LogisticFit};
pub use margins::{marginal_slope, predict_margins, MarginPoint};
pub use ols::{fit_model, ols_absorbed, ols_fit, weighted_coefficients, CovarianceKind, RegressionResult};
pub use rank::{spearman, Spearman};
