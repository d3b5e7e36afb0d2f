//! End-to-end tests that drive the compiled binary the way a user
//! would: subprocess invocations checked for exit code, stdout, and
//! stderr.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_growthlaw"))
}

fn run_binary(args: &[&str]) -> Output {
    binary().args(args).output().expect("binary runs")
}

fn stdout_of(output: &Output) -> &str {
    std::str::from_utf8(&output.stdout).expect("stdout is utf-8")
}

fn stderr_of(output: &Output) -> &str {
    std::str::from_utf8(&output.stderr).expect("stderr is utf-8")
}

fn simulate(dir: &Path, name: &str, seed: u64) -> PathBuf {
    let path = dir.join(name);
    let output = run_binary(&[
        "simulate",
        "--entities",
        "6",
        "--intervals",
        "5",
        "--b",
        "0.66",
        "--sigma-entity",
        "0.01",
        "--seed",
        &seed.to_string(),
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{}", stderr_of(&output));
    path
}

#[test]
fn validate_accepts_a_simulated_panel() {
    let dir = tempfile::tempdir().unwrap();
    let panel = simulate(dir.path(), "panel.csv", 7);
    let output = run_binary(&["validate", panel.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(
        stdout_of(&output),
        "ok: 6 regions, 2 sectors, 6 years, 72 rows\n"
    );
}

#[test]
fn validate_reports_parse_errors_with_the_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(
        &path,
        "region,sector,year,gva,employment,gfcf,outflow\nr01,all_sectors,2000,100,oops,20,30\n",
    )
    .unwrap();
    let output = run_binary(&["validate", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    let err = stderr_of(&output);
    assert!(err.contains("line 2"), "{err}");
    assert!(err.contains("employment"), "{err}");
}

#[test]
fn validate_lists_balance_defects() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("unbalanced.csv");
    std::fs::write(
        &path,
        "region,sector,year,gva,employment,gfcf,outflow\n\
         r01,all_sectors,2000,100,100,20,30\n\
         r01,s01,2000,100,100,20,30\n\
         r01,all_sectors,2001,105,101,21,31\n",
    )
    .unwrap();
    let output = run_binary(&["validate", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    let err = stderr_of(&output);
    assert!(err.contains("validation failed"), "{err}");
    assert!(err.contains("missing cell"), "{err}");
}

#[test]
fn missing_input_exits_with_the_io_code() {
    let output = run_binary(&["run", "--input", "/nonexistent/panel.csv"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr_of(&output).contains("/nonexistent/panel.csv"));
}

#[test]
fn unknown_estimator_exits_with_the_config_code() {
    let dir = tempfile::tempdir().unwrap();
    let panel = simulate(dir.path(), "panel.csv", 7);
    let output = run_binary(&[
        "run",
        "--input",
        panel.to_str().unwrap(),
        "--estimators",
        "nope",
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_of(&output).contains("unknown estimator"));
}

#[test]
fn run_renders_the_full_table() {
    let dir = tempfile::tempdir().unwrap();
    let panel = simulate(dir.path(), "panel.csv", 42);
    let output = run_binary(&["run", "--input", panel.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr_of(&output));
    let text = stdout_of(&output);
    assert!(text.contains("== sector: all_sectors =="), "{text}");
    assert!(text.contains("== sector: s01 =="), "{text}");
    for equation in [
        "verdoorn",
        "kaldor",
        "rowthorn-p",
        "rowthorn-q",
        "augmented",
    ] {
        assert!(text.contains(equation), "{text}");
    }
    assert!(text.contains("DIF"), "{text}");
    assert!(text.contains("GLS"), "{text}");
}

#[test]
fn run_output_is_byte_identical_across_invocations() {
    let dir = tempfile::tempdir().unwrap();
    let panel = simulate(dir.path(), "panel.csv", 9);
    for format in ["table", "csv", "records"] {
        let args = [
            "run",
            "--input",
            panel.to_str().unwrap(),
            "--format",
            format,
        ];
        let first = run_binary(&args);
        let second = run_binary(&args);
        assert_eq!(first.stdout, second.stdout, "format {format}");
        assert_eq!(first.status.code(), second.status.code());
    }
}

#[test]
fn csv_format_emits_the_flat_schema() {
    let dir = tempfile::tempdir().unwrap();
    let panel = simulate(dir.path(), "panel.csv", 3);
    let output = run_binary(&[
        "run",
        "--input",
        panel.to_str().unwrap(),
        "--format",
        "csv",
        "--equations",
        "verdoorn",
        "--estimators",
        "dif",
    ]);
    let text = stdout_of(&output);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "group,equation,estimator,record,term,estimate,std_error,t_stat,flag,dw,r_squared,df,theta,verdict,warnings,error"
    );
    assert!(text.contains("coefficient,q,"), "{text}");
    assert!(text.contains(",summary,"), "{text}");
}

#[test]
fn records_format_is_json_per_line() {
    let dir = tempfile::tempdir().unwrap();
    let panel = simulate(dir.path(), "panel.csv", 3);
    let output = run_binary(&[
        "run",
        "--input",
        panel.to_str().unwrap(),
        "--format",
        "records",
    ]);
    let text = stdout_of(&output);
    let mut kinds = std::collections::BTreeSet::new();
    for line in text.lines() {
        let value: serde_json::Value = serde_json::from_str(line).expect(line);
        kinds.insert(value["record"].as_str().unwrap().to_string());
    }
    assert!(kinds.contains("run"), "{kinds:?}");
    assert!(kinds.contains("coefficient"), "{kinds:?}");
    assert!(kinds.contains("summary"), "{kinds:?}");
}

#[test]
fn stars_in_the_table_agree_with_the_records_flags() {
    let dir = tempfile::tempdir().unwrap();
    let panel = simulate(dir.path(), "panel.csv", 13);
    let args_base = [
        "run",
        "--input",
        panel.to_str().unwrap(),
        "--equations",
        "verdoorn",
    ];
    let table = run_binary(&[&args_base[..], &["--format", "table"]].concat());
    let records = run_binary(&[&args_base[..], &["--format", "records"]].concat());
    let table_text = stdout_of(&table);
    for line in stdout_of(&records).lines() {
        let value: serde_json::Value = serde_json::from_str(line).unwrap();
        if value["record"] != "coefficient" || value["group"] != "s01" || value["term"] != "q" {
            continue;
        }
        let estimate = value["estimate"].as_f64().unwrap();
        let flag = value["flag"].as_str().unwrap();
        let star = match flag {
            "at_5pct" => "*",
            "at_10pct" => "**",
            _ => "",
        };
        let cell = format!("{estimate:.3}{star} (");
        assert!(
            table_text.contains(&cell),
            "missing {cell:?} in:\n{table_text}"
        );
    }
}

#[test]
fn by_region_grouping_slices_each_region() {
    let dir = tempfile::tempdir().unwrap();
    let panel = simulate(dir.path(), "panel.csv", 5);
    let output = run_binary(&[
        "run",
        "--input",
        panel.to_str().unwrap(),
        "--grouping",
        "by-region",
        "--equations",
        "verdoorn",
        "--estimators",
        "dif",
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr_of(&output));
    let text = stdout_of(&output);
    for region in ["r01", "r02", "r03", "r04", "r05", "r06"] {
        assert!(text.contains(&format!("== region: {region} ==")), "{text}");
    }
    assert!(!text.contains("all_sectors"), "{text}");
}

#[test]
fn config_file_drives_the_run_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let panel = simulate(dir.path(), "panel.csv", 21);
    let config_path = dir.path().join("run.toml");
    std::fs::write(
        &config_path,
        format!(
            "input = {:?}\nequations = [\"kaldor\"]\nestimators = [\"gls\"]\nformat = \"csv\"\n",
            panel.to_str().unwrap()
        ),
    )
    .unwrap();

    let from_file = run_binary(&["run", "--config", config_path.to_str().unwrap()]);
    assert_eq!(
        from_file.status.code(),
        Some(0),
        "{}",
        stderr_of(&from_file)
    );
    let text = stdout_of(&from_file);
    assert!(text.starts_with("group,equation"), "{text}");
    assert!(text.contains("kaldor"), "{text}");
    assert!(!text.contains("verdoorn"), "{text}");

    let overridden = run_binary(&[
        "run",
        "--config",
        config_path.to_str().unwrap(),
        "--format",
        "table",
        "--equations",
        "verdoorn",
    ]);
    let text = stdout_of(&overridden);
    assert!(text.contains("== sector:"), "{text}");
    assert!(text.contains("verdoorn"), "{text}");
    assert!(!text.contains("kaldor"), "{text}");
}

#[test]
fn simulate_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let first = simulate(dir.path(), "a.csv", 99);
    let second = simulate(dir.path(), "b.csv", 99);
    let third = simulate(dir.path(), "c.csv", 100);
    let bytes_a = std::fs::read(&first).unwrap();
    assert_eq!(bytes_a, std::fs::read(&second).unwrap());
    assert_ne!(bytes_a, std::fs::read(&third).unwrap());

    let truth = std::fs::read_to_string(dir.path().join("a.csv.truth.toml")).unwrap();
    assert!(truth.contains("rng = \"chacha8\""), "{truth}");
    assert!(truth.contains("a1 = 0.66"), "{truth}");
    assert!(truth.contains("seed = 99"), "{truth}");

    let output = run_binary(&["validate", first.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr_of(&output));
}

#[test]
fn noiseless_simulation_recovers_the_planted_slope_through_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("exact.csv");
    let sim = run_binary(&[
        "simulate",
        "--entities",
        "5",
        "--intervals",
        "4",
        "--b",
        "0.66",
        "--sigma-noise",
        "0",
        "--seed",
        "8",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(sim.status.success(), "{}", stderr_of(&sim));

    let output = run_binary(&[
        "run",
        "--input",
        path.to_str().unwrap(),
        "--equations",
        "verdoorn",
        "--estimators",
        "dif",
        "--format",
        "records",
    ]);
    let mut checked = false;
    for line in stdout_of(&output).lines() {
        let value: serde_json::Value = serde_json::from_str(line).unwrap();
        if value["record"] == "coefficient" && value["group"] == "s01" && value["term"] == "q" {
            let estimate = value["estimate"].as_f64().unwrap();
            assert!(
                (estimate - 0.66).abs() < 1e-8,
                "planted 0.66, estimated {estimate}"
            );
            checked = true;
        }
    }
    assert!(checked, "no q coefficient record found");
}

#[test]
fn identity_check_passes_on_clean_panels_for_both_estimators() {
    let dir = tempfile::tempdir().unwrap();
    let panel = simulate(dir.path(), "panel.csv", 17);
    for estimator in ["dif", "gls"] {
        let output = run_binary(&[
            "identity-check",
            "--input",
            panel.to_str().unwrap(),
            "--estimator",
            estimator,
        ]);
        assert_eq!(output.status.code(), Some(0), "{}", stderr_of(&output));
        let text = stdout_of(&output);
        assert!(text.contains("d = 1 - b"), "{text}");
        assert!(text.contains("PASS"), "{text}");
        assert!(!text.contains("FAIL"), "{text}");
    }
    let gls = run_binary(&[
        "identity-check",
        "--input",
        panel.to_str().unwrap(),
        "--estimator",
        "gls",
    ]);
    let text = stdout_of(&gls);
    assert!(text.contains("theta "), "{text}");
    assert!(text.contains("c = -a"), "{text}");
    assert!(text.contains("lambda2 = lambda1"), "{text}");
    assert!(text.contains("eps2 = 1 + eps1"), "{text}");
}

#[test]
fn clap_usage_errors_use_the_config_exit_code() {
    let output = run_binary(&["run", "--no-such-flag"]);
    assert_eq!(output.status.code(), Some(2));
}
