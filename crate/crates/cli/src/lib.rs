//! Batch front end for `ssum-core`: instance generators, a solve dispatcher that
//! emits result records, and CSV experiment suites.
//!
//! Everything is seeded; the same seed and flags give byte-identical output.

pub mod config;
pub mod experiment;
pub mod generate;
pub mod record;

pub use config::{Algorithm, ExperimentConfig, Format, Overrides};
pub use experiment::{run_experiment, Suite};
pub use generate::{generate, generate_instance, Generated, InstanceKind};
pub use record::{run_solve, SolveRecord};

use ssum_core::{InstanceError, ParseError, SolveError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("solver: {0}")]
    Solver(#[from] SolveError),
    #[error("instance: {0}")]
    Instance(#[from] InstanceError),
    #[error("parse: {0}")]
    Parse(#[from] ParseError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for anything the caller got wrong, 3 when a solver refused its input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Solver(_) => 3,
            _ => 2,
        }
    }
}
