//! Command implementations. Each returns the text to print and an exit
//! code, leaving process control and argument parsing to the binary.

use std::fmt::Write as _;
use std::path::Path;

use growthlaw_core::{
    classify_returns, fit_model_with_levels, growth_rates, identity_check, DgpConfig,
    EstimatorKind, Grouping, GrowthPanel, ModelSpec, PanelDataset,
};

use crate::config::{GroupingMode, RunConfig};
use crate::error::CliError;
use crate::io::{parse_panel, truth_path, write_panel, write_truth};
use crate::render::{render_with_levels, Cell, FitSummary, RunLevels};

/// Parse and validate a panel file, reporting its shape.
pub fn validate_command(path: &Path) -> Result<String, CliError> {
    let dataset = parse_panel(path)?;
    Ok(format!(
        "ok: {} regions, {} sectors, {} years, {} rows\n",
        dataset.regions().len(),
        dataset.sectors().len(),
        dataset.years().len(),
        dataset.observations.len(),
    ))
}

fn group_names(dataset: &PanelDataset, mode: GroupingMode) -> Vec<String> {
    match mode {
        GroupingMode::BySector => dataset.sectors(),
        GroupingMode::ByRegion => dataset.regions(),
    }
}

fn grouping_for(mode: GroupingMode, group: &str) -> Grouping {
    match mode {
        GroupingMode::BySector => Grouping::BySector(group.to_string()),
        GroupingMode::ByRegion => Grouping::ByRegion(group.to_string()),
    }
}

fn summarize(fit: growthlaw_core::FitResult) -> FitSummary {
    let verdict = classify_returns(&fit).ok().map(|c| c.verdict);
    FitSummary {
        dw: fit.fit.durbin_watson,
        r_squared: fit.fit.r_squared,
        df: fit.fit.df,
        theta: fit.components.as_ref().map(|vc| vc.theta),
        verdict,
        coefficients: fit.coefficients,
        warnings: fit.warnings,
    }
}

/// Fit every requested (group, equation, estimator) cell and render the
/// result. A cell that cannot be estimated becomes an inline error
/// marker; the command only fails outright when no cell succeeds.
pub fn run_command(config: &RunConfig) -> Result<(String, i32), CliError> {
    let dataset = parse_panel(&config.input)?;
    let panel = growth_rates(&dataset)?;
    let groups = group_names(&dataset, config.grouping);

    let mut cells = Vec::new();
    for group in &groups {
        let grouping = grouping_for(config.grouping, group);
        for &equation in &config.equations {
            for &estimator in &config.estimators {
                let spec = ModelSpec {
                    equation,
                    estimator,
                    grouping: grouping.clone(),
                };
                let outcome =
                    fit_model_with_levels(&panel, &spec, config.strict_level, config.loose_level)
                        .map(summarize)
                        .map_err(|e| e.to_string());
                cells.push(Cell {
                    group: group.clone(),
                    equation,
                    estimator,
                    outcome,
                });
            }
        }
    }

    let output = render_with_levels(
        &cells,
        config.format,
        config.grouping.label(),
        RunLevels {
            strict: config.strict_level,
            loose: config.loose_level,
        },
    );
    let all_failed = cells.iter().all(|c| c.outcome.is_err());
    Ok((output, if all_failed { 2 } else { 0 }))
}

/// Generate a synthetic panel, write it with its planted-truth sidecar,
/// and report where everything went.
pub fn simulate_command(config: &DgpConfig, out: &Path) -> Result<String, CliError> {
    let (dataset, _) = growthlaw_core::generate(config)?;
    write_panel(&dataset, out)?;
    write_truth(config, out)?;
    Ok(format!(
        "wrote {} rows to {} (truth sidecar {})\n",
        dataset.observations.len(),
        out.display(),
        truth_path(out).display(),
    ))
}

fn identity_section(
    out: &mut String,
    panel: &GrowthPanel,
    estimator: EstimatorKind,
    mode: GroupingMode,
    group: &str,
) -> bool {
    let _ = writeln!(out, "== {}: {group} ==", mode.label());
    match identity_check(panel, estimator, &grouping_for(mode, group)) {
        Ok(report) => {
            if let Some(theta) = report.theta {
                let _ = writeln!(out, "theta {theta}");
            }
            for check in &report.checks {
                let _ = writeln!(
                    out,
                    "{}: lhs {} rhs {} residual {:e} {}",
                    check.name,
                    check.lhs,
                    check.rhs,
                    check.residual,
                    if check.pass { "PASS" } else { "FAIL" },
                );
            }
            report.all_pass()
        }
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            false
        }
    }
}

/// Verify the cross-equation identities on every group of the input.
pub fn identity_command(
    input: &Path,
    estimator: EstimatorKind,
    mode: GroupingMode,
) -> Result<(String, i32), CliError> {
    let dataset = parse_panel(input)?;
    let panel = growth_rates(&dataset)?;
    let groups = group_names(&dataset, mode);

    let mut out = String::new();
    let mut all_pass = true;
    for (i, group) in groups.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        all_pass &= identity_section(&mut out, &panel, estimator, mode, group);
    }
    Ok((out, if all_pass { 0 } else { 2 }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::OutputFormat;
    use growthlaw_core::Equation;
    use std::path::PathBuf;

    fn simulated(dir: &Path, config: &DgpConfig) -> PathBuf {
        let path = dir.join("panel.csv");
        simulate_command(config, &path).unwrap();
        path
    }

    fn run_config(input: PathBuf) -> RunConfig {
        RunConfig {
            input,
            grouping: GroupingMode::BySector,
            equations: Equation::ALL.to_vec(),
            estimators: vec![EstimatorKind::Dif, EstimatorKind::Gls],
            strict_level: 0.05,
            loose_level: 0.10,
            format: OutputFormat::Table,
        }
    }

    #[test]
    fn run_renders_every_group_and_exits_clean() {
        let dir = tempfile::tempdir().unwrap();
        let config = DgpConfig {
            n_entities: 6,
            n_intervals: 5,
            seed: 11,
            ..DgpConfig::default()
        };
        let input = simulated(dir.path(), &config);
        let (output, code) = run_command(&run_config(input)).unwrap();
        assert_eq!(code, 0);
        assert!(output.contains("== sector: all_sectors =="), "{output}");
        assert!(output.contains("== sector: s01 =="), "{output}");
        assert!(output.contains("verdoorn"), "{output}");
    }

    #[test]
    fn run_is_byte_identical_across_invocations() {
        let dir = tempfile::tempdir().unwrap();
        let input = simulated(dir.path(), &DgpConfig::default());
        for format in [
            OutputFormat::Table,
            OutputFormat::Csv,
            OutputFormat::Records,
        ] {
            let mut config = run_config(input.clone());
            config.format = format;
            let (first, _) = run_command(&config).unwrap();
            let (second, _) = run_command(&config).unwrap();
            assert_eq!(first, second);
        }
    }

    #[test]
    fn cell_failures_do_not_take_down_the_run() {
        let dir = tempfile::tempdir().unwrap();
        let config = DgpConfig {
            n_entities: 3,
            n_intervals: 2,
            seed: 5,
            ..DgpConfig::default()
        };
        let input = simulated(dir.path(), &config);
        let mut rc = run_config(input);
        rc.equations = vec![Equation::Verdoorn, Equation::Augmented];
        let (output, code) = run_command(&rc).unwrap();
        assert_eq!(code, 0, "{output}");
        assert!(output.contains("failed:"), "{output}");
        assert!(output.contains("verdoorn"), "{output}");
    }

    #[test]
    fn all_cells_failing_signals_estimation_failure() {
        let dir = tempfile::tempdir().unwrap();
        let config = DgpConfig {
            n_entities: 2,
            n_intervals: 2,
            seed: 5,
            ..DgpConfig::default()
        };
        let input = simulated(dir.path(), &config);
        let mut rc = run_config(input);
        rc.equations = vec![Equation::Augmented];
        let (output, code) = run_command(&rc).unwrap();
        assert_eq!(code, 2, "{output}");
        assert!(output.contains("failed:"), "{output}");
    }

    #[test]
    fn identity_command_passes_on_synthetic_panels() {
        let dir = tempfile::tempdir().unwrap();
        let config = DgpConfig {
            n_entities: 6,
            n_intervals: 5,
            seed: 23,
            ..DgpConfig::default()
        };
        let input = simulated(dir.path(), &config);
        for estimator in [EstimatorKind::Dif, EstimatorKind::Gls] {
            let (output, code) =
                identity_command(&input, estimator, GroupingMode::BySector).unwrap();
            assert_eq!(code, 0, "{output}");
            assert!(output.contains("d = 1 - b"), "{output}");
            assert!(output.contains("PASS"), "{output}");
            assert!(!output.contains("FAIL"), "{output}");
        }
        let (gls_out, _) =
            identity_command(&input, EstimatorKind::Gls, GroupingMode::BySector).unwrap();
        assert!(gls_out.contains("theta "), "{gls_out}");
        assert!(gls_out.contains("lambda2 = lambda1"), "{gls_out}");
    }

    #[test]
    fn validate_command_reports_the_shape() {
        let dir = tempfile::tempdir().unwrap();
        let config = DgpConfig {
            n_entities: 4,
            n_intervals: 3,
            seed: 2,
            ..DgpConfig::default()
        };
        let input = simulated(dir.path(), &config);
        let report = validate_command(&input).unwrap();
        assert_eq!(report, "ok: 4 regions, 2 sectors, 4 years, 32 rows\n");
    }
}
