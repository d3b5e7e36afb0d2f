//! Ordinary least squares with the inference statistics the rest of the
//! crate builds on: coefficient standard errors, t ratios, R-squared, the
//! Durbin-Watson statistic, and two-sided significance flags.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::tdist;

/// Reciprocal-condition threshold below which a design is treated as
/// singular. The condition number is measured on X'X, i.e. as the squared
/// singular-value ratio of X.
const RCOND_MIN: f64 = 1e-12;

/// A named-column design matrix in column-major storage.
#[derive(Debug, Clone)]
pub struct DesignMatrix {
    names: Vec<String>,
    cols: Vec<Vec<f64>>,
    rows: usize,
}

impl DesignMatrix {
    /// Builds a design matrix from named columns. All columns must be
    /// non-empty, of equal length, and finite.
    pub fn new(names: Vec<String>, cols: Vec<Vec<f64>>) -> Result<Self> {
        if names.len() != cols.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} column names for {} columns",
                names.len(),
                cols.len()
            )));
        }
        if cols.is_empty() {
            return Err(Error::DimensionMismatch(
                "design matrix has no columns".into(),
            ));
        }
        let rows = cols[0].len();
        if rows == 0 {
            return Err(Error::DimensionMismatch("design matrix has no rows".into()));
        }
        for (name, col) in names.iter().zip(&cols) {
            if col.len() != rows {
                return Err(Error::DimensionMismatch(format!(
                    "column '{name}' has {} rows, expected {rows}",
                    col.len()
                )));
            }
            if let Some(i) = col.iter().position(|v| !v.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "non-finite value in design column '{name}' at row {i}"
                )));
            }
        }
        Ok(Self { names, cols, rows })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.cols[j]
    }

    /// True when some column is constant and nonzero, i.e. the design
    /// spans an intercept. Detection covers scaled intercepts such as the
    /// (1 - theta) column of a quasi-demeaned regression, not just a
    /// literal all-ones column.
    pub fn has_constant(&self) -> bool {
        self.cols
            .iter()
            .any(|c| c[0] != 0.0 && c.iter().all(|&v| v == c[0]))
    }

    fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols.len(), |i, j| self.cols[j][i])
    }
}

/// Result of a least-squares fit.
#[derive(Debug, Clone)]
pub struct OlsFit {
    /// Coefficient estimates, in design-column order.
    pub coefficients: Vec<f64>,
    /// Standard errors of the coefficients.
    pub std_errors: Vec<f64>,
    /// t ratios, coefficient over standard error.
    pub t_stats: Vec<f64>,
    /// Diagonal of (X'X)^-1, kept so callers can rescale standard errors
    /// under a different residual-variance estimate.
    pub xtx_inv_diag: Vec<f64>,
    /// Residuals in row order.
    pub residuals: Vec<f64>,
    /// Fitted values in row order.
    pub fitted: Vec<f64>,
    /// Sum of squared residuals.
    pub ssr: f64,
    /// Residual variance, SSR over `df`.
    pub sigma2: f64,
    /// R-squared: centered when the design spans an intercept, uncentered
    /// otherwise. NaN when the total sum of squares is zero.
    pub r_squared: f64,
    /// Durbin-Watson statistic of the residuals in the given row order,
    /// clamped to [0, 4]. NaN in the degenerate case of an exactly zero
    /// residual norm.
    pub durbin_watson: f64,
    /// Residual degrees of freedom: rows minus columns.
    pub df: usize,
    /// Number of observations.
    pub nobs: usize,
}

/// Fits y on the given design by QR-decomposed least squares.
///
/// Rejects designs with an identically zero column, a duplicated column,
/// no spare residual degree of freedom, or a reciprocal condition number
/// on X'X below 1e-12. The Durbin-Watson statistic is computed on the row
/// order as given; panel estimators pass rows in the canonical
/// (entity, year) sort.
pub fn ols_fit(x: &DesignMatrix, y: &[f64]) -> Result<OlsFit> {
    let n = x.rows();
    let k = x.ncols();
    if y.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} response values for {n} design rows",
            y.len()
        )));
    }
    if let Some(i) = y.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "non-finite response value at row {i}"
        )));
    }
    if n <= k {
        return Err(Error::InsufficientObservations { rows: n, cols: k });
    }
    for (j, col) in x.cols.iter().enumerate() {
        if col.iter().all(|&v| v == 0.0) {
            return Err(Error::SingularDesign(format!(
                "column '{}' is identically zero",
                x.names[j]
            )));
        }
        for (j2, col2) in x.cols.iter().enumerate().skip(j + 1) {
            if col == col2 {
                return Err(Error::SingularDesign(format!(
                    "columns '{}' and '{}' are identical",
                    x.names[j], x.names[j2]
                )));
            }
        }
    }

    let xm = x.to_dmatrix();
    let sv = xm.clone().svd(false, false).singular_values;
    let smax = sv.max();
    let smin = sv.min();
    let rcond = if smax > 0.0 {
        (smin / smax).powi(2)
    } else {
        0.0
    };
    if !rcond.is_finite() || rcond < RCOND_MIN {
        return Err(Error::SingularDesign(format!(
            "reciprocal condition number {rcond:.3e} below {RCOND_MIN:.0e}"
        )));
    }

    let yv = nalgebra::DVector::from_column_slice(y);
    let qr = xm.clone().qr();
    let q = qr.q();
    let r = qr.r();
    let qty = q.transpose() * &yv;
    let beta = r
        .solve_upper_triangular(&qty)
        .ok_or_else(|| Error::SingularDesign("triangular solve failed".into()))?;
    let r_inv = r
        .solve_upper_triangular(&DMatrix::identity(k, k))
        .ok_or_else(|| Error::SingularDesign("triangular inversion failed".into()))?;
    let xtx_inv = &r_inv * r_inv.transpose();

    let fitted_v = &xm * &beta;
    let residuals: Vec<f64> = (0..n).map(|i| y[i] - fitted_v[i]).collect();
    let ssr: f64 = residuals.iter().map(|e| e * e).sum();
    let df = n - k;
    let sigma2 = ssr / df as f64;

    let mut std_errors = Vec::with_capacity(k);
    let mut t_stats = Vec::with_capacity(k);
    let mut xtx_inv_diag = Vec::with_capacity(k);
    for j in 0..k {
        let d = xtx_inv[(j, j)];
        xtx_inv_diag.push(d);
        let s = (sigma2 * d).max(0.0).sqrt();
        std_errors.push(s);
        t_stats.push(t_ratio(beta[j], s));
    }

    let sst = if x.has_constant() {
        let ybar = y.iter().sum::<f64>() / n as f64;
        y.iter().map(|v| (v - ybar).powi(2)).sum::<f64>()
    } else {
        y.iter().map(|v| v * v).sum::<f64>()
    };
    let r_squared = if sst > 0.0 { 1.0 - ssr / sst } else { f64::NAN };
    let dw = durbin_watson(&residuals).unwrap_or(f64::NAN);

    Ok(OlsFit {
        coefficients: beta.iter().copied().collect(),
        std_errors,
        t_stats,
        xtx_inv_diag,
        residuals,
        fitted: fitted_v.iter().copied().collect(),
        ssr,
        sigma2,
        r_squared,
        durbin_watson: dw,
        df,
        nobs: n,
    })
}

/// t ratio with the perfect-fit convention: a zero standard error yields
/// signed infinity for a nonzero coefficient and zero otherwise.
pub(crate) fn t_ratio(coef: f64, se: f64) -> f64 {
    if se > 0.0 {
        coef / se
    } else if coef == 0.0 {
        0.0
    } else {
        f64::INFINITY.copysign(coef)
    }
}

/// Durbin-Watson statistic of a residual series, clamped to [0, 4].
///
/// The caller is responsible for passing residuals in a meaningful serial
/// order; panel fits use the canonical (entity, year) ordering.
pub fn durbin_watson(residuals: &[f64]) -> Result<f64> {
    if residuals.len() < 2 {
        return Err(Error::InsufficientObservations {
            rows: residuals.len(),
            cols: 2,
        });
    }
    let denom: f64 = residuals.iter().map(|e| e * e).sum();
    if denom == 0.0 {
        return Err(Error::ZeroResidualNorm);
    }
    let numer: f64 = residuals.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum();
    Ok((numer / denom).clamp(0.0, 4.0))
}

/// Two-sided significance of a t ratio: the 5% flag wins over the 10%
/// flag, so the three states are mutually exclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SignificanceFlag {
    None,
    At10Pct,
    At5Pct,
}

impl SignificanceFlag {
    pub fn name(self) -> &'static str {
        match self {
            SignificanceFlag::None => "none",
            SignificanceFlag::At10Pct => "at_10pct",
            SignificanceFlag::At5Pct => "at_5pct",
        }
    }
}

/// Flags a t ratio against two-sided 5% and 10% critical values of the
/// Student-t distribution with `df` degrees of freedom: at_5pct when |t|
/// exceeds the 97.5th percentile, at_10pct when it exceeds the 95th but
/// not the 97.5th, none otherwise.
pub fn significance_flag(t: f64, df: usize) -> Result<SignificanceFlag> {
    significance_flag_with(t, df, 0.05, 0.10)
}

/// As [`significance_flag`], with caller-chosen strict and loose two-sided
/// levels. Requires 0 < strict <= loose < 1 so the bands nest.
pub fn significance_flag_with(
    t: f64,
    df: usize,
    strict_level: f64,
    loose_level: f64,
) -> Result<SignificanceFlag> {
    if df == 0 {
        return Err(Error::InvalidDf(df));
    }
    if !(strict_level > 0.0 && strict_level <= loose_level && loose_level < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "significance levels must satisfy 0 < strict <= loose < 1, got {strict_level} and {loose_level}"
        )));
    }
    if t.is_nan() {
        return Ok(SignificanceFlag::None);
    }
    let crit_strict = tdist::quantile(1.0 - strict_level / 2.0, df as f64)?;
    let crit_loose = tdist::quantile(1.0 - loose_level / 2.0, df as f64)?;
    Ok(if t.abs() > crit_strict {
        SignificanceFlag::At5Pct
    } else if t.abs() > crit_loose {
        SignificanceFlag::At10Pct
    } else {
        SignificanceFlag::None
    })
}
