//! Configuration, orchestration and file emitters behind the `locstate`
//! binary.

pub mod config;
pub mod emit;
pub mod run;

pub use config::{resolve, ExperimentConfig, Format, Mode, Preset, Settings};
pub use run::run;

/// Failures surfaced by the binary, each with its own exit status.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

/// Cap the global pool at `LOCSTATE_THREADS` when set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("LOCSTATE_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Config(format!("LOCSTATE_THREADS: expected a positive integer, got '{value}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Config(format!("LOCSTATE_THREADS: {e}")))
}
