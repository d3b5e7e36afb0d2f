//! Panel-data growth-law regression engine.
//!
//! Implements the Verdoorn/Kaldor/Rowthorn family of growth-law
//! regressions on balanced region-by-sector panels: log-difference
//! growth rates, the augmented specification with investment, outflow,
//! and concentration regressors, fixed-effects-in-differences (DIF) and
//! random-effects GLS estimation, inference statistics, and the exact
//! cross-equation identities that tie the four basic equations together.
//!
//! Module map:
//!
//! - [`stats`]: OLS kernel with standard errors, t statistics, R
//!   squared, Durbin-Watson, and significance flags.
//! - [`tdist`]: Student-t CDF and quantiles via the regularized
//!   incomplete beta function.
//! - [`panel`]: level panel model, balance validation, growth-rate and
//!   ratio-variable construction, first differencing.
//! - [`estimators`]: DIF (first differences, no intercept), pooled and
//!   within baselines, and random-effects GLS with two-step variance
//!   components.
//! - [`verdoorn`]: the five model specifications, cross-equation
//!   identity checks, and returns-to-scale classification.
//! - [`synth`]: synthetic data generation with known coefficients and
//!   the Monte Carlo harness used as the estimator-recovery oracle.

pub mod error;
pub mod estimators;
pub mod panel;
pub mod stats;
pub mod synth;
pub mod tdist;
pub mod verdoorn;

pub use error::{Error, Result};
pub use estimators::{
    estimate_dif, estimate_gls, estimate_gls_with_theta, estimate_pooled, estimate_within,
    EstimatorKind, VarianceComponents,
};
pub use panel::{
    build_ratios, first_difference, growth_rates, validate, Defect, Grouping, GrowthObservation,
    GrowthPanel, LevelObservation, PanelDataset, Var, ALL_SECTORS,
};
pub use stats::{
    durbin_watson, ols_fit, significance_flag, significance_flag_with, DesignMatrix, OlsFit,
    SignificanceFlag,
};
pub use synth::{
    generate, monte_carlo, replication_seed, DgpConfig, McSummary, TermSummary, SYNTH_SECTOR,
};
pub use verdoorn::{
    classify_returns, fit_model, fit_model_with_levels, identity_check, returns_verdict,
    Coefficient, Equation, FitResult, IdentityCheck, IdentityReport, ModelSpec,
    ReturnsClassification, ReturnsVerdict, Term, IDENTITY_TOL,
};
