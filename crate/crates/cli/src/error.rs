use serde::Serialize;
use thiserror::Error;

use contact_geom::fit::FitError;
use contact_geom::geometry::GeometryError;

#[derive(Debug, Clone, PartialEq, Error, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("validation error: {message}")]
    Validation {
        message: String,
        /// Sample point where the failure was observed.
        witness: Option<Vec<String>>,
    },
    #[error("manifest has no potential")]
    MissingPotential,
    #[error("--verify needs --lambda-tilde and --mu, or constants in the manifest")]
    MissingConstants,
    #[error("degenerate system: {message}")]
    DegenerateSystem { message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::DegenerateSystem { .. } => 1,
            _ => 2,
        }
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        let witness = match &e {
            GeometryError::SingularFrame(p) | GeometryError::SingularMetric(p) => {
                p.as_ref().map(|p| p.to_strings())
            }
            GeometryError::EtaXiNotOne { witness, .. } => Some(witness.to_strings()),
            _ => None,
        };
        CliError::Validation {
            message: e.to_string(),
            witness,
        }
    }
}

impl From<FitError> for CliError {
    fn from(e: FitError) -> Self {
        match e {
            FitError::DegenerateSystem(s) => CliError::DegenerateSystem {
                message: format!("{s}; the sampled equations do not determine the constants"),
            },
        }
    }
}
