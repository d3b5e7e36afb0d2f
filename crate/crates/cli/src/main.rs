use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use growthlaw_cli::commands::{identity_command, run_command, simulate_command, validate_command};
use growthlaw_cli::config::{self, FileConfig, RunFlags};
use growthlaw_cli::error::CliError;
use growthlaw_core::DgpConfig;

#[derive(Parser)]
#[command(
    name = "growthlaw",
    version,
    about = "Panel growth-law estimation: Verdoorn, Kaldor, and Rowthorn equations \
             with fixed-effects and GLS estimators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a panel CSV against the schema and balance rules
    Validate {
        /// Panel CSV file to check
        file: PathBuf,
    },
    /// Estimate the selected equations on every group and print the results
    Run {
        /// Panel CSV file to estimate on
        #[arg(long)]
        input: Option<PathBuf>,
        /// TOML config file; command-line flags override its values
        #[arg(long)]
        config: Option<PathBuf>,
        /// How to slice the panel: by-sector or by-region
        #[arg(long)]
        grouping: Option<String>,
        /// Comma-separated equations: verdoorn, kaldor, rowthorn-p, rowthorn-q, augmented
        #[arg(long, value_delimiter = ',')]
        equations: Option<Vec<String>>,
        /// Comma-separated estimators: dif, gls
        #[arg(long, value_delimiter = ',')]
        estimators: Option<Vec<String>>,
        /// Output format: table, csv, or records
        #[arg(long)]
        format: Option<String>,
    },
    /// Generate a synthetic panel with known coefficients and a truth sidecar
    #[command(allow_negative_numbers = true)]
    Simulate {
        /// Number of regions
        #[arg(long, default_value_t = 5)]
        entities: usize,
        /// Number of growth intervals per region
        #[arg(long, default_value_t = 4)]
        intervals: usize,
        /// Output-growth coefficient of the planted productivity equation
        #[arg(long, default_value_t = 0.7)]
        b: f64,
        /// Intercept of the planted productivity equation
        #[arg(long, default_value_t = 0.01)]
        a0: f64,
        /// Investment-ratio coefficient
        #[arg(long, default_value_t = 0.0)]
        a2: f64,
        /// Outflow-ratio coefficient
        #[arg(long, default_value_t = 0.0)]
        a3: f64,
        /// Concentration coefficient
        #[arg(long, default_value_t = 0.0)]
        a4: f64,
        /// Standard deviation of the permanent entity effects
        #[arg(long, default_value_t = 0.0)]
        sigma_entity: f64,
        /// Standard deviation of the idiosyncratic noise
        #[arg(long, default_value_t = 0.01)]
        sigma_noise: f64,
        /// Mean of output growth
        #[arg(long, default_value_t = 0.03)]
        q_mean: f64,
        /// Standard deviation of output growth
        #[arg(long, default_value_t = 0.02)]
        q_sd: f64,
        /// How strongly entity effects load on output growth
        #[arg(long, default_value_t = 0.0)]
        effect_q_loading: f64,
        /// RNG seed
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Where to write the panel CSV
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify the cross-equation identities on every group of a panel
    IdentityCheck {
        /// Panel CSV file to check
        #[arg(long)]
        input: PathBuf,
        /// Estimator to check: dif or gls
        #[arg(long)]
        estimator: String,
        /// How to slice the panel: by-sector or by-region
        #[arg(long, default_value = "by-sector")]
        grouping: String,
    },
}

fn dispatch(command: Command) -> Result<(String, i32), CliError> {
    match command {
        Command::Validate { file } => validate_command(&file).map(|text| (text, 0)),
        Command::Run {
            input,
            config: config_path,
            grouping,
            equations,
            estimators,
            format,
        } => {
            let file = match &config_path {
                Some(path) => config::load_file(path)?,
                None => FileConfig::default(),
            };
            let flags = RunFlags {
                input,
                grouping,
                equations,
                estimators,
                format,
            };
            let run_config = config::resolve(flags, file)?;
            run_command(&run_config)
        }
        Command::Simulate {
            entities,
            intervals,
            b,
            a0,
            a2,
            a3,
            a4,
            sigma_entity,
            sigma_noise,
            q_mean,
            q_sd,
            effect_q_loading,
            seed,
            out,
        } => {
            let dgp = DgpConfig {
                n_entities: entities,
                n_intervals: intervals,
                a0,
                a1: b,
                a2,
                a3,
                a4,
                sigma_entity,
                sigma_noise,
                q_mean,
                q_sd,
                effect_q_loading,
                seed,
            };
            simulate_command(&dgp, &out).map(|text| (text, 0))
        }
        Command::IdentityCheck {
            input,
            estimator,
            grouping,
        } => {
            let estimator = config::parse_estimator(&estimator)?;
            let mode = config::parse_grouping(&grouping)?;
            identity_command(&input, estimator, mode)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code as u8)
        }
        Err(error) => {
            eprintln!("error: {error}");
            if let CliError::Validation(defects) = &error {
                for defect in defects {
                    eprintln!("  {defect}");
                }
            }
            ExitCode::from(error.exit_code() as u8)
        }
    }
}
