//! The five growth-law specifications, the exact cross-equation
//! identities linking them, and the returns-to-scale reading of the
//! output-growth coefficient.
//!
//! Because p = q - e holds row by row, least squares on a shared design
//! ties the equations together: fitting e on q must give slope 1 - b and
//! intercept -a when p on q gives b and a, and fitting q on e must give
//! the p-on-e coefficients with the slope raised by one. [`identity_check`]
//! verifies those relations at machine precision on real fits.

use crate::error::{Error, Result};
use crate::estimators::{
    estimate_dif, estimate_gls, estimate_gls_with_theta, EstimatorKind, VarianceComponents,
};
use crate::panel::{Grouping, GrowthPanel, Var};
use crate::stats::{significance_flag_with, OlsFit, SignificanceFlag};

/// The five model specifications.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equation {
    /// Productivity growth on output growth.
    Verdoorn,
    /// Employment growth on output growth.
    Kaldor,
    /// Productivity growth on employment growth.
    RowthornP,
    /// Output growth on employment growth.
    RowthornQ,
    /// Productivity growth on output growth plus the investment ratio,
    /// outflow ratio, and employment concentration.
    Augmented,
}

impl Equation {
    pub const ALL: [Equation; 5] = [
        Equation::Verdoorn,
        Equation::Kaldor,
        Equation::RowthornP,
        Equation::RowthornQ,
        Equation::Augmented,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Equation::Verdoorn => "verdoorn",
            Equation::Kaldor => "kaldor",
            Equation::RowthornP => "rowthorn-p",
            Equation::RowthornQ => "rowthorn-q",
            Equation::Augmented => "augmented",
        }
    }

    pub fn dependent(self) -> Var {
        match self {
            Equation::Verdoorn | Equation::RowthornP | Equation::Augmented => Var::P,
            Equation::Kaldor => Var::E,
            Equation::RowthornQ => Var::Q,
        }
    }

    pub fn regressors(self) -> &'static [Var] {
        match self {
            Equation::Verdoorn | Equation::Kaldor => &[Var::Q],
            Equation::RowthornP | Equation::RowthornQ => &[Var::E],
            Equation::Augmented => &[Var::Q, Var::Cq, Var::Fq, Var::Conc],
        }
    }
}

/// One equation, one estimator, one panel slice.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub equation: Equation,
    pub estimator: EstimatorKind,
    pub grouping: Grouping,
}

/// A named position in a fitted equation: the intercept or one of the
/// regressors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Term {
    Constant,
    Regressor(Var),
}

impl Term {
    pub fn name(self) -> &'static str {
        match self {
            Term::Constant => "const",
            Term::Regressor(v) => v.name(),
        }
    }
}

/// One fitted coefficient with its inference statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficient {
    pub term: Term,
    pub estimate: f64,
    pub std_error: f64,
    pub t_stat: f64,
    pub flag: SignificanceFlag,
}

/// A fitted model: the underlying least-squares output plus named
/// coefficients, significance flags, and any estimation warnings.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub spec: ModelSpec,
    pub fit: OlsFit,
    pub coefficients: Vec<Coefficient>,
    /// Variance components when the estimator is GLS.
    pub components: Option<VarianceComponents>,
    pub warnings: Vec<String>,
}

impl FitResult {
    pub fn coefficient(&self, term: Term) -> Option<&Coefficient> {
        self.coefficients.iter().find(|c| c.term == term)
    }
}

/// Fits one specification on the panel slice its grouping selects, using
/// the default 5% / 10% significance levels.
pub fn fit_model(panel: &GrowthPanel, spec: &ModelSpec) -> Result<FitResult> {
    fit_model_with_levels(panel, spec, 0.05, 0.10)
}

/// As [`fit_model`] with caller-chosen strict and loose two-sided
/// significance levels for the coefficient flags.
pub fn fit_model_with_levels(
    panel: &GrowthPanel,
    spec: &ModelSpec,
    strict_level: f64,
    loose_level: f64,
) -> Result<FitResult> {
    let slice = panel.restrict(&spec.grouping)?;
    let regressors = spec.equation.regressors();
    let dependent = spec.equation.dependent();

    let (fit, components, mut terms) = match spec.estimator {
        EstimatorKind::Dif => {
            let fit = estimate_dif(&slice, regressors, dependent)?;
            (fit, None, Vec::new())
        }
        EstimatorKind::Gls => {
            let (fit, vc) = estimate_gls(&slice, regressors, dependent)?;
            (fit, Some(vc), vec![Term::Constant])
        }
    };
    terms.extend(regressors.iter().map(|&v| Term::Regressor(v)));
    debug_assert_eq!(terms.len(), fit.coefficients.len());

    let mut coefficients = Vec::with_capacity(terms.len());
    for (j, term) in terms.into_iter().enumerate() {
        let t_stat = fit.t_stats[j];
        coefficients.push(Coefficient {
            term,
            estimate: fit.coefficients[j],
            std_error: fit.std_errors[j],
            t_stat,
            flag: significance_flag_with(t_stat, fit.df, strict_level, loose_level)?,
        });
    }

    let mut warnings = Vec::new();
    if let Some(vc) = &components {
        if vc.clamped {
            warnings.push("entity variance estimate was negative and clamped to zero".to_string());
        }
    }

    Ok(FitResult {
        spec: spec.clone(),
        fit,
        coefficients,
        components,
        warnings,
    })
}

/// One verified cross-equation relation.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub pass: bool,
}

/// The full identity report for one estimator on one panel slice.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub estimator: EstimatorKind,
    pub grouping: Grouping,
    /// Quasi-demeaning weight shared across all four fits (GLS only).
    pub theta: Option<f64>,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Tolerance for the cross-equation identities.
pub const IDENTITY_TOL: f64 = 1e-10;

fn check(name: &'static str, lhs: f64, rhs: f64) -> IdentityCheck {
    let residual = (lhs - rhs).abs();
    IdentityCheck {
        name,
        lhs,
        rhs,
        residual,
        pass: residual < IDENTITY_TOL,
    }
}

/// Fits the productivity-on-output and employment-on-output pair, and the
/// two growth-on-employment equations, on one shared transformed sample,
/// then verifies the exact least-squares identities: the employment slope
/// is one minus the productivity slope, the intercepts are opposite (GLS
/// only), the two employment-regressor intercepts coincide (GLS only),
/// and the output-on-employment slope is one plus the
/// productivity-on-employment slope.
///
/// For GLS the quasi-demeaning weight is estimated once, from the
/// productivity-on-output equation, and reused everywhere; the identities
/// only hold when all four fits share one transform.
pub fn identity_check(
    panel: &GrowthPanel,
    estimator: EstimatorKind,
    grouping: &Grouping,
) -> Result<IdentityReport> {
    let slice = panel.restrict(grouping)?;
    match estimator {
        EstimatorKind::Dif => {
            let b = estimate_dif(&slice, &[Var::Q], Var::P)?.coefficients[0];
            let d = estimate_dif(&slice, &[Var::Q], Var::E)?.coefficients[0];
            let eps1 = estimate_dif(&slice, &[Var::E], Var::P)?.coefficients[0];
            let eps2 = estimate_dif(&slice, &[Var::E], Var::Q)?.coefficients[0];
            Ok(IdentityReport {
                estimator,
                grouping: grouping.clone(),
                theta: None,
                checks: vec![
                    check("d = 1 - b", d, 1.0 - b),
                    check("eps2 = 1 + eps1", eps2, 1.0 + eps1),
                ],
            })
        }
        EstimatorKind::Gls => {
            let (verdoorn, vc) = estimate_gls(&slice, &[Var::Q], Var::P)?;
            let theta = vc.theta;
            let (a, b) = (verdoorn.coefficients[0], verdoorn.coefficients[1]);
            let kaldor = estimate_gls_with_theta(&slice, &[Var::Q], Var::E, theta)?;
            let (c, d) = (kaldor.coefficients[0], kaldor.coefficients[1]);
            let r1 = estimate_gls_with_theta(&slice, &[Var::E], Var::P, theta)?;
            let (l1, eps1) = (r1.coefficients[0], r1.coefficients[1]);
            let r2 = estimate_gls_with_theta(&slice, &[Var::E], Var::Q, theta)?;
            let (l2, eps2) = (r2.coefficients[0], r2.coefficients[1]);
            Ok(IdentityReport {
                estimator,
                grouping: grouping.clone(),
                theta: Some(theta),
                checks: vec![
                    check("d = 1 - b", d, 1.0 - b),
                    check("c = -a", c, -a),
                    check("lambda2 = lambda1", l2, l1),
                    check("eps2 = 1 + eps1", eps2, 1.0 + eps1),
                ],
            })
        }
    }
}

/// Verdict on scale economies read off the output-growth coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReturnsVerdict {
    Increasing,
    Constant,
    Decreasing,
    /// Coefficient at or above one: the implied elasticity leaves the
    /// interpretable range.
    OutOfBounds,
    /// Coefficient not significant at the strict level.
    Inconclusive,
}

impl ReturnsVerdict {
    pub fn name(self) -> &'static str {
        match self {
            ReturnsVerdict::Increasing => "increasing",
            ReturnsVerdict::Constant => "constant",
            ReturnsVerdict::Decreasing => "decreasing",
            ReturnsVerdict::OutOfBounds => "out_of_bounds",
            ReturnsVerdict::Inconclusive => "inconclusive",
        }
    }
}

/// Classification of the output-growth coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReturnsClassification {
    pub verdict: ReturnsVerdict,
    /// The estimated coefficient the verdict is based on.
    pub b: f64,
    /// Whether that coefficient is significant at the strict (5%) level.
    pub significant: bool,
}

/// The classification rule on its own: an exact zero is CONSTANT by
/// convention, anything not significant at 5% is INCONCLUSIVE, and a
/// significant coefficient is DECREASING below zero, INCREASING strictly
/// between zero and one, and OUT_OF_BOUNDS at one or above.
pub fn returns_verdict(b: f64, significant_at_5pct: bool) -> ReturnsVerdict {
    if b == 0.0 {
        return ReturnsVerdict::Constant;
    }
    if !significant_at_5pct {
        return ReturnsVerdict::Inconclusive;
    }
    if b < 0.0 {
        ReturnsVerdict::Decreasing
    } else if b < 1.0 {
        ReturnsVerdict::Increasing
    } else {
        ReturnsVerdict::OutOfBounds
    }
}

/// Classifies returns to scale from a fitted model's output-growth
/// coefficient. Only the productivity-on-output equations carry that
/// coefficient; other specs are rejected.
pub fn classify_returns(fit: &FitResult) -> Result<ReturnsClassification> {
    if !matches!(fit.spec.equation, Equation::Verdoorn | Equation::Augmented) {
        return Err(Error::WrongSpec(format!(
            "returns classification needs the output-growth coefficient; equation '{}' does not estimate it",
            fit.spec.equation.name()
        )));
    }
    let coef = fit
        .coefficient(Term::Regressor(Var::Q))
        .ok_or_else(|| Error::WrongSpec("fit has no output-growth coefficient".into()))?;
    let significant = coef.flag == SignificanceFlag::At5Pct;
    Ok(ReturnsClassification {
        verdict: returns_verdict(coef.estimate, significant),
        b: coef.estimate,
        significant,
    })
}
