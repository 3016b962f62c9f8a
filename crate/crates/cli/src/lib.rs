//! Configuration-driven experiment runner: runs schemes and viscous
//! references from TOML configs and writes CSV tables, convergence studies
//! and comparisons.

pub mod config;
pub mod csv_io;
pub mod error;
pub mod experiment;
pub mod verify;

pub use config::{parse_config, ExperimentConfig};
pub use csv_io::CsvTable;
pub use error::CliError;
pub use experiment::{
    compare_tables, convergence_study, exact_table, run_experiment, ConvergenceTable, RunOptions, RunOutput, RunSummary,
};
pub use verify::{run_verification, VerifyReport};

use std::path::Path;

pub fn load_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
    parse_config(&text)
}
