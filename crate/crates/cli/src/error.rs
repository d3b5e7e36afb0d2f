//! CLI-level failures and their mapping to process exit codes.

use growthlaw_core::Defect;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// The input file is not in the expected delimited format.
    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    /// The file parsed but the dataset violates panel invariants.
    #[error("validation failed with {} defect(s)", .0.len())]
    Validation(Vec<Defect>),

    #[error(transparent)]
    Core(#[from] growthlaw_core::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("config: {0}")]
    Config(String),
}

impl CliError {
    /// Exit code contract: 1 for anything wrong with the input data,
    /// 2 for configuration and estimation failures. Success is 0 and a
    /// run whose every cell failed exits 2; both are decided by the
    /// command, not here.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Validation(_) | CliError::Io(_) => 1,
            CliError::Core(_) | CliError::Config(_) => 2,
        }
    }
}
