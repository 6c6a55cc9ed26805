//! CLI error taxonomy mapped onto stable exit codes.

use thiserror::Error;

/// Exit code contract: 0 success, 2 input error, 3 resource guard,
/// 4 internal invariant violation.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Guard(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Guard(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

fn is_guard(e: &qraudit_core::Error) -> bool {
    matches!(
        e,
        qraudit_core::Error::TooManyQubits { .. }
            | qraudit_core::Error::CompileTooLarge { .. }
            | qraudit_core::Error::KronTooLarge { .. }
    )
}

/// Core error raised while digesting user input.
pub fn input_error(e: qraudit_core::Error) -> CliError {
    if is_guard(&e) {
        CliError::Guard(e.to_string())
    } else {
        CliError::Input(e.to_string())
    }
}

/// Core error raised after inputs were validated; anything non-guard here
/// means an invariant broke.
pub fn internal_error(e: qraudit_core::Error) -> CliError {
    if is_guard(&e) {
        CliError::Guard(e.to_string())
    } else {
        CliError::Internal(e.to_string())
    }
}
