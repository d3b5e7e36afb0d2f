//! Run configuration: defaults, the optional TOML config file, and the
//! flag overrides. Precedence is defaults, then file, then flags.

use std::path::{Path, PathBuf};

use growthlaw_core::{Equation, EstimatorKind};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Table,
    Csv,
    Records,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupingMode {
    BySector,
    ByRegion,
}

impl GroupingMode {
    /// What one group is, for section headers and record fields.
    pub fn label(self) -> &'static str {
        match self {
            GroupingMode::BySector => "sector",
            GroupingMode::ByRegion => "region",
        }
    }
}

pub fn parse_grouping(raw: &str) -> Result<GroupingMode, CliError> {
    match raw {
        "by-sector" => Ok(GroupingMode::BySector),
        "by-region" => Ok(GroupingMode::ByRegion),
        _ => Err(CliError::Config(format!(
            "unknown grouping {raw:?} (expected by-sector or by-region)"
        ))),
    }
}

pub fn parse_format(raw: &str) -> Result<OutputFormat, CliError> {
    match raw {
        "table" => Ok(OutputFormat::Table),
        "csv" => Ok(OutputFormat::Csv),
        "records" => Ok(OutputFormat::Records),
        _ => Err(CliError::Config(format!(
            "unknown format {raw:?} (expected table, csv, or records)"
        ))),
    }
}

pub fn parse_equation(raw: &str) -> Result<Equation, CliError> {
    Equation::ALL
        .into_iter()
        .find(|e| e.name() == raw)
        .ok_or_else(|| {
            let known: Vec<&str> = Equation::ALL.iter().map(|e| e.name()).collect();
            CliError::Config(format!(
                "unknown equation {raw:?} (expected one of {})",
                known.join(", ")
            ))
        })
}

pub fn parse_estimator(raw: &str) -> Result<EstimatorKind, CliError> {
    match raw {
        "dif" => Ok(EstimatorKind::Dif),
        "gls" => Ok(EstimatorKind::Gls),
        _ => Err(CliError::Config(format!(
            "unknown estimator {raw:?} (expected dif or gls)"
        ))),
    }
}

/// The optional config file. Every field mirrors a flag except the
/// significance levels, which have no flag form.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub input: Option<String>,
    pub grouping: Option<String>,
    pub equations: Option<Vec<String>>,
    pub estimators: Option<Vec<String>>,
    pub format: Option<String>,
    pub strict_level: Option<f64>,
    pub loose_level: Option<f64>,
}

pub fn load_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Flag values as they arrive from the command line, all optional.
#[derive(Debug, Default)]
pub struct RunFlags {
    pub input: Option<PathBuf>,
    pub grouping: Option<String>,
    pub equations: Option<Vec<String>>,
    pub estimators: Option<Vec<String>>,
    pub format: Option<String>,
}

/// A fully resolved run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: PathBuf,
    pub grouping: GroupingMode,
    pub equations: Vec<Equation>,
    pub estimators: Vec<EstimatorKind>,
    pub strict_level: f64,
    pub loose_level: f64,
    pub format: OutputFormat,
}

fn dedup_preserving_order<T: PartialEq>(items: Vec<T>) -> Vec<T> {
    let mut out: Vec<T> = Vec::with_capacity(items.len());
    for item in items {
        if !out.contains(&item) {
            out.push(item);
        }
    }
    out
}

pub fn resolve(flags: RunFlags, file: FileConfig) -> Result<RunConfig, CliError> {
    let input = flags
        .input
        .or_else(|| file.input.as_ref().map(PathBuf::from))
        .ok_or_else(|| CliError::Config("no input file given".to_string()))?;

    let grouping = match flags.grouping.as_deref().or(file.grouping.as_deref()) {
        Some(raw) => parse_grouping(raw)?,
        None => GroupingMode::BySector,
    };
    let format = match flags.format.as_deref().or(file.format.as_deref()) {
        Some(raw) => parse_format(raw)?,
        None => OutputFormat::Table,
    };

    let equations = match flags.equations.or(file.equations) {
        Some(names) => dedup_preserving_order(
            names
                .iter()
                .map(|n| parse_equation(n))
                .collect::<Result<Vec<_>, _>>()?,
        ),
        None => Equation::ALL.to_vec(),
    };
    if equations.is_empty() {
        return Err(CliError::Config("no equations selected".to_string()));
    }

    let estimators = match flags.estimators.or(file.estimators) {
        Some(names) => dedup_preserving_order(
            names
                .iter()
                .map(|n| parse_estimator(n))
                .collect::<Result<Vec<_>, _>>()?,
        ),
        None => vec![EstimatorKind::Dif, EstimatorKind::Gls],
    };
    if estimators.is_empty() {
        return Err(CliError::Config("no estimators selected".to_string()));
    }

    let strict_level = file.strict_level.unwrap_or(0.05);
    let loose_level = file.loose_level.unwrap_or(0.10);
    if !(strict_level > 0.0 && strict_level <= loose_level && loose_level < 1.0) {
        return Err(CliError::Config(format!(
            "significance levels must satisfy 0 < strict <= loose < 1, got {strict_level} and {loose_level}"
        )));
    }

    Ok(RunConfig {
        input,
        grouping,
        equations,
        estimators,
        strict_level,
        loose_level,
        format,
    })
}
