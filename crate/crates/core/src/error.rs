//! Error kinds shared across the crate.
//!
//! The three variants map onto the CLI exit-code contract: validation
//! failures (bad inputs or configuration), numerical-accuracy failures
//! (integrator tolerance breaches, NaN, norm/trace drift), and resource
//! limits (mode counts exceeding the configured caps).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("validation: {0}")]
    Validation(String),
    #[error("numerical accuracy: {0}")]
    Accuracy(String),
    #[error("resource limit: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code associated with this error kind.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) => 1,
            Error::Accuracy(_) => 2,
            Error::Resource(_) => 3,
        }
    }
}
