//! The two panel estimators behind every reported coefficient: fixed
//! effects via within-entity first differences (DIF) and random-effects
//! GLS via quasi-demeaning with two-step variance components. Pooled and
//! within estimators are exposed as well because the GLS weight
//! degenerates to each of them at theta = 0 and theta = 1.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::panel::{first_difference, GrowthObservation, GrowthPanel, Var};
use crate::stats::{ols_fit, t_ratio, DesignMatrix, OlsFit};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorKind {
    Dif,
    Gls,
}

impl EstimatorKind {
    pub fn name(self) -> &'static str {
        match self {
            EstimatorKind::Dif => "dif",
            EstimatorKind::Gls => "gls",
        }
    }
}

/// Two-step variance components of the random-effects transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceComponents {
    /// Idiosyncratic error variance, from the within regression with
    /// degrees of freedom NT - N - k.
    pub sigma2_idio: f64,
    /// Entity random-effect variance, from the between regression after
    /// subtracting sigma2_idio / T; clamped at zero.
    pub sigma2_entity: f64,
    /// Quasi-demeaning weight, 1 - sqrt(sigma2_idio / (sigma2_idio +
    /// T * sigma2_entity)). Zero exactly when sigma2_entity is zero.
    pub theta: f64,
    /// True when the between-minus-within subtraction went negative and
    /// sigma2_entity was clamped to zero.
    pub clamped: bool,
}

/// A balanced panel regrouped for estimation: rows in canonical (region,
/// sector, year) order, contiguous per entity.
struct Blocks<'a> {
    rows: Vec<&'a GrowthObservation>,
    n_entities: usize,
    /// Common interval count per entity.
    t_len: usize,
}

impl<'a> Blocks<'a> {
    fn entity_rows(&self, i: usize) -> &[&'a GrowthObservation] {
        &self.rows[i * self.t_len..(i + 1) * self.t_len]
    }

    fn column(&self, var: Var) -> Vec<f64> {
        self.rows.iter().map(|r| r.value(var)).collect()
    }

    /// Per-entity mean of one variable, expanded back to row length.
    fn entity_mean_column(&self, var: Var) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.rows.len());
        for i in 0..self.n_entities {
            let rows = self.entity_rows(i);
            let mean = rows.iter().map(|r| r.value(var)).sum::<f64>() / rows.len() as f64;
            out.extend(std::iter::repeat_n(mean, rows.len()));
        }
        out
    }

    /// One mean per entity.
    fn entity_means(&self, var: Var) -> Vec<f64> {
        (0..self.n_entities)
            .map(|i| {
                let rows = self.entity_rows(i);
                rows.iter().map(|r| r.value(var)).sum::<f64>() / rows.len() as f64
            })
            .collect()
    }
}

fn blocks(panel: &GrowthPanel) -> Result<Blocks<'_>> {
    let mut by_entity: BTreeMap<(&str, &str), Vec<&GrowthObservation>> = BTreeMap::new();
    for row in &panel.rows {
        by_entity
            .entry((row.region.as_str(), row.sector.as_str()))
            .or_default()
            .push(row);
    }
    if by_entity.is_empty() {
        return Err(Error::InsufficientObservations { rows: 0, cols: 1 });
    }

    let mut reference_years: Option<Vec<i32>> = None;
    let mut rows = Vec::with_capacity(panel.rows.len());
    let n_entities = by_entity.len();
    for ((region, sector), mut series) in by_entity {
        series.sort_by_key(|r| r.interval_end_year);
        let years: Vec<i32> = series.iter().map(|r| r.interval_end_year).collect();
        for w in years.windows(2) {
            if w[0] == w[1] {
                return Err(Error::UnbalancedPanel(format!(
                    "duplicate interval {} for entity ({region}, {sector})",
                    w[0]
                )));
            }
        }
        match &reference_years {
            None => reference_years = Some(years),
            Some(reference) => {
                if *reference != years {
                    return Err(Error::UnbalancedPanel(format!(
                        "entity ({region}, {sector}) covers intervals {years:?}, expected {reference:?}"
                    )));
                }
            }
        }
        rows.extend(series);
    }
    let t_len = rows.len() / n_entities;
    Ok(Blocks {
        rows,
        n_entities,
        t_len,
    })
}

fn design_from(names: Vec<String>, cols: Vec<Vec<f64>>) -> Result<DesignMatrix> {
    DesignMatrix::new(names, cols)
}

fn regressor_names(regressors: &[Var]) -> Vec<String> {
    regressors.iter().map(|v| v.name().to_string()).collect()
}

fn require_regressors(regressors: &[Var]) -> Result<()> {
    if regressors.is_empty() {
        return Err(Error::InvalidConfig(
            "at least one regressor is required".into(),
        ));
    }
    Ok(())
}

/// Fixed effects in differences: first-differences every variable within
/// entity and fits the differenced dependent on the differenced
/// regressors without an intercept. Entity-constant additive effects drop
/// out exactly.
pub fn estimate_dif(panel: &GrowthPanel, regressors: &[Var], dependent: Var) -> Result<OlsFit> {
    require_regressors(regressors)?;
    let differenced = first_difference(panel)?;
    let b = blocks(&differenced)?;
    let y = b.column(dependent);
    let x = design_from(
        regressor_names(regressors),
        regressors.iter().map(|&v| b.column(v)).collect(),
    )?;
    ols_fit(&x, &y)
}

/// Pooled OLS with an intercept, ignoring the panel structure.
pub fn estimate_pooled(panel: &GrowthPanel, regressors: &[Var], dependent: Var) -> Result<OlsFit> {
    require_regressors(regressors)?;
    let b = blocks(panel)?;
    let y = b.column(dependent);
    let mut names = vec!["const".to_string()];
    names.extend(regressor_names(regressors));
    let mut cols = vec![vec![1.0; b.rows.len()]];
    cols.extend(regressors.iter().map(|&v| b.column(v)));
    let x = design_from(names, cols)?;
    ols_fit(&x, &y)
}

/// Within (entity-demeaned) estimator. Standard errors use the fixed
/// effects degrees of freedom NT - N - k, charging one parameter per
/// entity mean.
pub fn estimate_within(panel: &GrowthPanel, regressors: &[Var], dependent: Var) -> Result<OlsFit> {
    require_regressors(regressors)?;
    let b = blocks(panel)?;
    let nt = b.rows.len();
    let k = regressors.len();
    if nt <= b.n_entities + k {
        return Err(Error::InsufficientObservations {
            rows: nt,
            cols: b.n_entities + k,
        });
    }

    let demean = |var: Var| -> Vec<f64> {
        let raw = b.column(var);
        let means = b.entity_mean_column(var);
        raw.iter().zip(&means).map(|(v, m)| v - m).collect()
    };
    let y = demean(dependent);
    let x = design_from(
        regressor_names(regressors),
        regressors.iter().map(|&v| demean(v)).collect(),
    )?;
    let mut fit = ols_fit(&x, &y)?;

    let df = nt - b.n_entities - k;
    let sigma2 = fit.ssr / df as f64;
    fit.df = df;
    fit.sigma2 = sigma2;
    for j in 0..k {
        let se = (sigma2 * fit.xtx_inv_diag[j]).max(0.0).sqrt();
        fit.std_errors[j] = se;
        fit.t_stats[j] = t_ratio(fit.coefficients[j], se);
    }
    Ok(fit)
}

/// Random-effects GLS with a caller-supplied quasi-demeaning weight.
/// Every variable becomes v - theta * entity_mean(v); the intercept
/// column is 1 - theta, dropped entirely at theta = 1 where the transform
/// collapses to the within estimator.
pub fn estimate_gls_with_theta(
    panel: &GrowthPanel,
    regressors: &[Var],
    dependent: Var,
    theta: f64,
) -> Result<OlsFit> {
    require_regressors(regressors)?;
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::InvalidConfig(format!(
            "theta must lie in [0, 1], got {theta}"
        )));
    }
    let b = blocks(panel)?;
    let transform = |var: Var| -> Vec<f64> {
        let raw = b.column(var);
        let means = b.entity_mean_column(var);
        raw.iter().zip(&means).map(|(v, m)| v - theta * m).collect()
    };
    let y = transform(dependent);
    let mut names = Vec::with_capacity(regressors.len() + 1);
    let mut cols = Vec::with_capacity(regressors.len() + 1);
    if theta != 1.0 {
        names.push("const".to_string());
        cols.push(vec![1.0 - theta; b.rows.len()]);
    }
    names.extend(regressor_names(regressors));
    cols.extend(regressors.iter().map(|&v| transform(v)));
    let x = design_from(names, cols)?;
    ols_fit(&x, &y)
}

/// Random-effects GLS with variance components estimated by the two-step
/// within/between method, then quasi-demeaned OLS. Requires at least two
/// entities, at least two intervals each, and enough entities for the
/// between regression (more entities than regressors plus one).
pub fn estimate_gls(
    panel: &GrowthPanel,
    regressors: &[Var],
    dependent: Var,
) -> Result<(OlsFit, VarianceComponents)> {
    require_regressors(regressors)?;
    let within = estimate_within(panel, regressors, dependent)?;
    let sigma2_idio = within.sigma2;

    let b = blocks(panel)?;
    let t = b.t_len as f64;
    let y_means = b.entity_means(dependent);
    let mut names = vec!["const".to_string()];
    names.extend(regressor_names(regressors));
    let mut cols = vec![vec![1.0; b.n_entities]];
    cols.extend(regressors.iter().map(|&v| b.entity_means(v)));
    let between_x = design_from(names, cols)?;
    let between = ols_fit(&between_x, &y_means)?;

    let raw = between.sigma2 - sigma2_idio / t;
    let (sigma2_entity, clamped) = if raw < 0.0 { (0.0, true) } else { (raw, false) };
    let denom = sigma2_idio + t * sigma2_entity;
    let theta = if denom > 0.0 {
        1.0 - (sigma2_idio / denom).sqrt()
    } else {
        0.0
    };

    let fit = estimate_gls_with_theta(panel, regressors, dependent, theta)?;
    Ok((
        fit,
        VarianceComponents {
            sigma2_idio,
            sigma2_entity,
            theta,
            clamped,
        },
    ))
}
