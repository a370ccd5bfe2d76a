//! Subcommands of the `tightdesign` binary and the certificate pipeline.

pub mod args;
pub mod commands;
pub mod pipeline;

use thiserror::Error;

use tightdesign::prime_engine::PrimeError;
use tightdesign::search::SearchError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Prime(#[from] PrimeError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}

/// Exit status for a finished command: 0 when every check passed, 1 otherwise.
/// Errors map to 2.
pub fn exit_code(result: &Result<bool, CliError>) -> i32 {
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(_) => 2,
    }
}
