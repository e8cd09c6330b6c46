use thiserror::Error;

use crate::dto::{ErrorBody, ErrorDto};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Domain(#[from] tropjac_core::Error),
    /// Malformed flags or input files.
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl From<tropjac_core::ValidationError> for CliError {
    fn from(e: tropjac_core::ValidationError) -> Self {
        CliError::Domain(e.into())
    }
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Domain(e) => e.kind(),
            CliError::Input(_) => "InvalidInput",
            CliError::Io(_) => "Io",
            CliError::Json(_) => "InvalidJson",
            CliError::Csv(_) => "Csv",
        }
    }

    /// 2 for usage errors, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Json(_) => 2,
            _ => 1,
        }
    }

    pub fn to_dto(&self) -> ErrorDto {
        ErrorDto { error: ErrorBody { kind: self.kind().into(), message: self.to_string() } }
    }
}
