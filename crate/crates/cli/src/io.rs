//! Reading and writing the delimited panel format, and the planted-truth
//! sidecar written next to simulated datasets.
//!
//! The format is UTF-8 CSV with the exact header
//! `region,sector,year,gva,employment,gfcf,outflow`, one row per
//! (region, sector, year). Floats are written in the shortest
//! representation that parses back to the same value, so writing and
//! re-parsing a dataset is the identity.

use std::path::Path;

use growthlaw_core::{validate, DgpConfig, LevelObservation, PanelDataset};
use serde::Serialize;

use crate::error::CliError;

pub const HEADER: [&str; 7] = [
    "region",
    "sector",
    "year",
    "gva",
    "employment",
    "gfcf",
    "outflow",
];

fn parse_field<T: std::str::FromStr>(raw: &str, name: &str, line: u64) -> Result<T, CliError> {
    raw.parse().map_err(|_| CliError::Parse {
        line,
        message: format!("{name} field {raw:?} is not numeric"),
    })
}

/// Parses and validates a panel file. Parse problems carry the 1-based
/// line number; a structurally fine file with invariant violations comes
/// back as the full defect listing.
pub fn parse_panel(path: &Path) -> Result<PanelDataset, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_path(path)
        .map_err(|e| match CliError::from(e) {
            CliError::Io(io) => CliError::Io(std::io::Error::new(
                io.kind(),
                format!("{}: {io}", path.display()),
            )),
            other => other,
        })?;

    let mut observations = Vec::new();
    let mut saw_header = false;
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, csv::Position::line);
        if !saw_header {
            if record.iter().ne(HEADER) {
                return Err(CliError::Parse {
                    line,
                    message: format!(
                        "header must be exactly {:?}, got {:?}",
                        HEADER.join(","),
                        record.iter().collect::<Vec<_>>().join(",")
                    ),
                });
            }
            saw_header = true;
            continue;
        }
        if record.len() != HEADER.len() {
            return Err(CliError::Parse {
                line,
                message: format!("expected {} fields, got {}", HEADER.len(), record.len()),
            });
        }
        observations.push(LevelObservation {
            region: record[0].to_string(),
            sector: record[1].to_string(),
            year: parse_field(&record[2], "year", line)?,
            gva: parse_field(&record[3], "gva", line)?,
            employment: parse_field(&record[4], "employment", line)?,
            gfcf: parse_field(&record[5], "gfcf", line)?,
            outflow: parse_field(&record[6], "outflow", line)?,
        });
    }
    if !saw_header {
        return Err(CliError::Parse {
            line: 1,
            message: "empty file".to_string(),
        });
    }

    let dataset = PanelDataset::new(observations);
    let defects = validate(&dataset);
    if defects.is_empty() {
        Ok(dataset)
    } else {
        Err(CliError::Validation(defects))
    }
}

/// Writes a dataset in the standard format, rows in dataset order.
pub fn write_panel(dataset: &PanelDataset, path: &Path) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(HEADER)?;
    for o in &dataset.observations {
        writer.write_record([
            o.region.as_str(),
            o.sector.as_str(),
            &o.year.to_string(),
            &o.gva.to_string(),
            &o.employment.to_string(),
            &o.gfcf.to_string(),
            &o.outflow.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        let line = e.position().map_or(0, csv::Position::line);
        let message = e.to_string();
        match e.into_kind() {
            csv::ErrorKind::Io(io) => CliError::Io(io),
            _ => CliError::Parse { line, message },
        }
    }
}

#[derive(Serialize)]
struct Truth<'a> {
    rng: &'a str,
    seed: u64,
    n_entities: usize,
    n_intervals: usize,
    coefficients: Coefficients,
    noise: Noise,
}

#[derive(Serialize)]
struct Coefficients {
    a0: f64,
    a1: f64,
    a2: f64,
    a3: f64,
    a4: f64,
}

#[derive(Serialize)]
struct Noise {
    sigma_entity: f64,
    sigma_noise: f64,
    q_mean: f64,
    q_sd: f64,
    effect_q_loading: f64,
}

/// Path of the sidecar written next to a simulated panel.
pub fn truth_path(out: &Path) -> std::path::PathBuf {
    let mut name = out.file_name().map_or_else(
        || std::ffi::OsString::from("panel"),
        std::ffi::OsStr::to_os_string,
    );
    name.push(".truth.toml");
    out.with_file_name(name)
}

/// Records the planted configuration, including the generator identity,
/// so a simulated dataset is reproducible from its sidecar alone.
pub fn write_truth(config: &DgpConfig, out: &Path) -> Result<(), CliError> {
    let truth = Truth {
        rng: "chacha8",
        seed: config.seed,
        n_entities: config.n_entities,
        n_intervals: config.n_intervals,
        coefficients: Coefficients {
            a0: config.a0,
            a1: config.a1,
            a2: config.a2,
            a3: config.a3,
            a4: config.a4,
        },
        noise: Noise {
            sigma_entity: config.sigma_entity,
            sigma_noise: config.sigma_noise,
            q_mean: config.q_mean,
            q_sd: config.q_sd,
            effect_q_loading: config.effect_q_loading,
        },
    };
    let rendered = toml::to_string_pretty(&truth)
        .map_err(|e| CliError::Config(format!("sidecar serialization: {e}")))?;
    std::fs::write(truth_path(out), rendered)?;
    Ok(())
}
