//! Rendering of run results in the three output formats: the aligned
//! text table with journal-style star and parenthesis conventions, a
//! flat CSV at full float precision, and structured JSON records, one
//! per line.
//!
//! All three are deterministic functions of the cells: no timestamps,
//! no paths, no environment. Repeated runs on the same input produce
//! byte-identical output.

use std::fmt::Write as _;

use growthlaw_core::{
    Coefficient, Equation, EstimatorKind, ReturnsVerdict, SignificanceFlag, Term, Var,
};
use serde::Serialize;

use crate::config::OutputFormat;

/// Everything the renderers need from one successful fit.
#[derive(Debug, Clone)]
pub struct FitSummary {
    pub coefficients: Vec<Coefficient>,
    pub dw: f64,
    pub r_squared: f64,
    pub df: usize,
    /// Quasi-demeaning weight, present for GLS fits.
    pub theta: Option<f64>,
    /// Returns-to-scale verdict, present for the equations that carry
    /// the output-growth coefficient.
    pub verdict: Option<ReturnsVerdict>,
    pub warnings: Vec<String>,
}

/// One (group, equation, estimator) cell of the run grid.
#[derive(Debug, Clone)]
pub struct Cell {
    pub group: String,
    pub equation: Equation,
    pub estimator: EstimatorKind,
    pub outcome: Result<FitSummary, String>,
}

pub fn render(cells: &[Cell], format: OutputFormat, group_label: &str) -> String {
    match format {
        OutputFormat::Table => render_table(cells, group_label),
        OutputFormat::Csv => render_csv(cells),
        OutputFormat::Records => render_records(cells, group_label),
    }
}

/// House star convention: one star at the 5% level, two at the 10%
/// level, none otherwise.
fn stars(flag: SignificanceFlag) -> &'static str {
    match flag {
        SignificanceFlag::At5Pct => "*",
        SignificanceFlag::At10Pct => "**",
        SignificanceFlag::None => "",
    }
}

fn coefficient_text(c: &Coefficient) -> String {
    format!("{:.3}{} ({:.3})", c.estimate, stars(c.flag), c.t_stat)
}

fn estimator_heading(kind: EstimatorKind) -> &'static str {
    match kind {
        EstimatorKind::Dif => "DIF",
        EstimatorKind::Gls => "GLS",
    }
}

fn three_decimals_or_blank(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        format!("{v:.3}")
    }
}

const TERM_COLUMNS: [Term; 6] = [
    Term::Constant,
    Term::Regressor(Var::Q),
    Term::Regressor(Var::E),
    Term::Regressor(Var::Cq),
    Term::Regressor(Var::Fq),
    Term::Regressor(Var::Conc),
];

fn render_table(cells: &[Cell], group_label: &str) -> String {
    let headers: Vec<String> = ["equation", "est"]
        .into_iter()
        .map(str::to_string)
        .chain(TERM_COLUMNS.iter().map(|t| t.name().to_string()))
        .chain(
            ["DW", "R2", "df", "returns"]
                .into_iter()
                .map(str::to_string),
        )
        .collect();

    // One text row per cell; failed cells carry the message instead of
    // columns and are padded as a single trailing field.
    enum Row {
        Fit(Vec<String>),
        Failed {
            equation: String,
            est: String,
            message: String,
        },
    }

    let mut rows: Vec<(usize, Row)> = Vec::new();
    let mut warnings: Vec<Vec<String>> = Vec::new();
    let mut groups: Vec<&str> = Vec::new();
    for cell in cells {
        let group_index = match groups.iter().position(|g| *g == cell.group) {
            Some(i) => i,
            None => {
                groups.push(&cell.group);
                warnings.push(Vec::new());
                groups.len() - 1
            }
        };
        match &cell.outcome {
            Ok(fit) => {
                let mut fields = vec![
                    cell.equation.name().to_string(),
                    estimator_heading(cell.estimator).to_string(),
                ];
                for term in TERM_COLUMNS {
                    let text = fit
                        .coefficients
                        .iter()
                        .find(|c| c.term == term)
                        .map(coefficient_text)
                        .unwrap_or_default();
                    fields.push(text);
                }
                fields.push(three_decimals_or_blank(fit.dw));
                fields.push(three_decimals_or_blank(fit.r_squared));
                fields.push(fit.df.to_string());
                fields.push(
                    fit.verdict
                        .map(ReturnsVerdict::name)
                        .unwrap_or_default()
                        .to_string(),
                );
                rows.push((group_index, Row::Fit(fields)));
                for w in &fit.warnings {
                    warnings[group_index].push(format!(
                        "note: {} {}: {w}",
                        cell.equation.name(),
                        estimator_heading(cell.estimator)
                    ));
                }
            }
            Err(message) => rows.push((
                group_index,
                Row::Failed {
                    equation: cell.equation.name().to_string(),
                    est: estimator_heading(cell.estimator).to_string(),
                    message: format!("failed: {message}"),
                },
            )),
        }
    }

    let mut widths: Vec<usize> = headers.iter().map(String::len).collect();
    for (_, row) in &rows {
        match row {
            Row::Fit(fields) => {
                for (w, f) in widths.iter_mut().zip(fields) {
                    *w = (*w).max(f.len());
                }
            }
            Row::Failed { equation, est, .. } => {
                widths[0] = widths[0].max(equation.len());
                widths[1] = widths[1].max(est.len());
            }
        }
    }

    let pad_line = |fields: &[String]| -> String {
        let mut line = String::new();
        for (i, field) in fields.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            if i + 1 == fields.len() {
                line.push_str(field);
            } else {
                let _ = write!(line, "{field:<width$}", width = widths[i]);
            }
        }
        line.trim_end().to_string()
    };

    let mut out = String::new();
    for (group_index, group) in groups.iter().enumerate() {
        if group_index > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "== {group_label}: {group} ==");
        let _ = writeln!(out, "{}", pad_line(&headers));
        for (gi, row) in &rows {
            if gi != &group_index {
                continue;
            }
            match row {
                Row::Fit(fields) => {
                    let _ = writeln!(out, "{}", pad_line(fields));
                }
                Row::Failed {
                    equation,
                    est,
                    message,
                } => {
                    let _ = writeln!(
                        out,
                        "{}  {}  {message}",
                        format_args!("{equation:<w$}", w = widths[0]),
                        format_args!("{est:<w$}", w = widths[1]),
                    );
                }
            }
        }
        for note in &warnings[group_index] {
            let _ = writeln!(out, "{note}");
        }
    }
    out
}

fn display_or_blank(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        v.to_string()
    }
}

fn render_csv(cells: &[Cell]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record([
            "group",
            "equation",
            "estimator",
            "record",
            "term",
            "estimate",
            "std_error",
            "t_stat",
            "flag",
            "dw",
            "r_squared",
            "df",
            "theta",
            "verdict",
            "warnings",
            "error",
        ])
        .expect("writing to memory");
    for cell in cells {
        let head = [
            cell.group.as_str(),
            cell.equation.name(),
            cell.estimator.name(),
        ];
        match &cell.outcome {
            Ok(fit) => {
                for c in &fit.coefficients {
                    let record = [
                        head[0],
                        head[1],
                        head[2],
                        "coefficient",
                        c.term.name(),
                        &c.estimate.to_string(),
                        &c.std_error.to_string(),
                        &c.t_stat.to_string(),
                        c.flag.name(),
                        "",
                        "",
                        "",
                        "",
                        "",
                        "",
                        "",
                    ];
                    writer.write_record(record).expect("writing to memory");
                }
                let dw = display_or_blank(fit.dw);
                let r2 = display_or_blank(fit.r_squared);
                let df = fit.df.to_string();
                let theta = fit.theta.map(|t| t.to_string()).unwrap_or_default();
                let verdict = fit.verdict.map(ReturnsVerdict::name).unwrap_or_default();
                let joined = fit.warnings.join("; ");
                let record = [
                    head[0], head[1], head[2], "summary", "", "", "", "", "", &dw, &r2, &df,
                    &theta, verdict, &joined, "",
                ];
                writer.write_record(record).expect("writing to memory");
            }
            Err(message) => {
                let record = [
                    head[0], head[1], head[2], "error", "", "", "", "", "", "", "", "", "", "", "",
                    message,
                ];
                writer.write_record(record).expect("writing to memory");
            }
        }
    }
    String::from_utf8(writer.into_inner().expect("writing to memory")).expect("csv is utf-8")
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

#[derive(Serialize)]
#[serde(tag = "record", rename_all = "snake_case")]
enum Record<'a> {
    Run {
        grouping: &'a str,
        strict_level: f64,
        loose_level: f64,
    },
    Coefficient {
        group: &'a str,
        equation: &'a str,
        estimator: &'a str,
        term: &'a str,
        estimate: Option<f64>,
        std_error: Option<f64>,
        t_stat: Option<f64>,
        flag: &'a str,
    },
    Summary {
        group: &'a str,
        equation: &'a str,
        estimator: &'a str,
        dw: Option<f64>,
        r_squared: Option<f64>,
        df: usize,
        theta: Option<f64>,
        verdict: Option<&'a str>,
        warnings: &'a [String],
    },
    Error {
        group: &'a str,
        equation: &'a str,
        estimator: &'a str,
        message: &'a str,
    },
}

/// Significance levels the run used; carried on the leading run record.
/// Set by the command layer before rendering.
#[derive(Debug, Clone, Copy)]
pub struct RunLevels {
    pub strict: f64,
    pub loose: f64,
}

static DEFAULT_LEVELS: RunLevels = RunLevels {
    strict: 0.05,
    loose: 0.10,
};

fn render_records(cells: &[Cell], group_label: &str) -> String {
    render_records_with(cells, group_label, DEFAULT_LEVELS)
}

pub fn render_with_levels(
    cells: &[Cell],
    format: OutputFormat,
    group_label: &str,
    levels: RunLevels,
) -> String {
    match format {
        OutputFormat::Table => render_table(cells, group_label),
        OutputFormat::Csv => render_csv(cells),
        OutputFormat::Records => render_records_with(cells, group_label, levels),
    }
}

fn render_records_with(cells: &[Cell], group_label: &str, levels: RunLevels) -> String {
    let mut out = String::new();
    let mut push = |record: &Record| {
        let line = serde_json::to_string(record).expect("records are serializable");
        out.push_str(&line);
        out.push('\n');
    };
    push(&Record::Run {
        grouping: group_label,
        strict_level: levels.strict,
        loose_level: levels.loose,
    });
    for cell in cells {
        let (group, equation, estimator) = (
            cell.group.as_str(),
            cell.equation.name(),
            cell.estimator.name(),
        );
        match &cell.outcome {
            Ok(fit) => {
                for c in &fit.coefficients {
                    push(&Record::Coefficient {
                        group,
                        equation,
                        estimator,
                        term: c.term.name(),
                        estimate: finite(c.estimate),
                        std_error: finite(c.std_error),
                        t_stat: finite(c.t_stat),
                        flag: c.flag.name(),
                    });
                }
                push(&Record::Summary {
                    group,
                    equation,
                    estimator,
                    dw: finite(fit.dw),
                    r_squared: finite(fit.r_squared),
                    df: fit.df,
                    theta: fit.theta.and_then(finite),
                    verdict: fit.verdict.map(ReturnsVerdict::name),
                    warnings: &fit.warnings,
                });
            }
            Err(message) => push(&Record::Error {
                group,
                equation,
                estimator,
                message,
            }),
        }
    }
    out
}
