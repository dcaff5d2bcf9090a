//! Scenario runner for caustic geometry and turbulence processes.
//!
//! A scenario file names the initial data and the products to compute;
//! [`run::run`] validates every product before computing any of them and
//! returns the artifacts as bytes, and [`run::write_outputs`] stores them
//! with a manifest.

use std::path::PathBuf;

use thiserror::Error;

pub mod bundled;
pub mod run;
pub mod scenario;
pub mod svg;
pub mod verify;

pub use run::{run, write_outputs, Outputs};
pub use scenario::{Product, Scenario};
pub use verify::{verify, CheckOutcome, VerifyReport};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid scenario: {0}")]
    Validation(String),
    #[error("scenario has no [expect] block")]
    NoExpectations,
    #[error("{product}: {message}")]
    Computation { product: String, message: String },
    #[error("cannot read {}: {source}", path.display())]
    Input { path: PathBuf, source: std::io::Error },
    #[error("cannot write {}: {source}", path.display())]
    Output { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// 2 for problems with the scenario, 3 for failures while computing or
    /// writing. Failed expectations exit with 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Validation(_) | CliError::NoExpectations | CliError::Input { .. } => 2,
            CliError::Computation { .. } | CliError::Output { .. } => 3,
        }
    }
}
