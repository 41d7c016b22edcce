//! Error categories mapped onto the process exit codes: 0 success,
//! 1 verification failure, 2 usage error, 3 resource budget exceeded.

use thiserror::Error;

use sumprod_core::field::FieldError;
use sumprod_core::geometry::{CertificateError, GeometryError};
use sumprod_core::notation::ParseError;
use sumprod_core::report::ReportError;
use sumprod_core::sumset::{EnergyError, SetError};
use sumprod_core::valued::AmbientMismatch;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("resource budget exceeded: {0}")]
    Resource(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Resource(_) => 3,
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<SetError> for CliError {
    fn from(e: SetError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<AmbientMismatch> for CliError {
    fn from(e: AmbientMismatch) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<EnergyError> for CliError {
    fn from(e: EnergyError) -> Self {
        match e {
            EnergyError::BudgetExceeded { .. } => CliError::Resource(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<ReportError> for CliError {
    fn from(e: ReportError) -> Self {
        match e {
            ReportError::Energy(EnergyError::BudgetExceeded { .. }) => {
                CliError::Resource(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<CertificateError> for CliError {
    fn from(e: CertificateError) -> Self {
        CliError::Verification(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("i/o error: {e}"))
    }
}
