//! CLI error type carrying the process exit code.

use pseudomap_core::assign::AssignError;
use thiserror::Error;

/// Exit codes: 2 validation/IO/parse, 3 infeasible assignment, 4 budget
/// exceeded.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{context}: {source}")]
    Io {
        context: String,
        source: std::io::Error,
    },
    #[error("infeasible assignment: {0}")]
    Infeasible(String),
    #[error("combinatorial budget exceeded")]
    BudgetExceeded,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Parse { .. } | CliError::Io { .. } => 2,
            CliError::Infeasible(_) => 3,
            CliError::BudgetExceeded => 4,
        }
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        CliError::Validation(msg.into())
    }

    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }
}

impl From<AssignError> for CliError {
    fn from(e: AssignError) -> Self {
        match e {
            AssignError::BudgetExceeded => CliError::BudgetExceeded,
            AssignError::InsufficientPredictions => {
                CliError::Infeasible("insufficient predictions".into())
            }
            other => CliError::Validation(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
