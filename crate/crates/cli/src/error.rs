use std::fmt;

use potts_core::PottsError;

/// Exit statuses.
pub const OK: u8 = 0;
pub const CHECK_FAILED: u8 = 1;
pub const USAGE: u8 = 2;
pub const RESOURCE: u8 = 3;
pub const REGIME: u8 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: USAGE, message: message.into() }
    }

    pub fn io(err: std::io::Error) -> Self {
        CliError { code: RESOURCE, message: err.to_string() }
    }

    pub fn internal(err: impl fmt::Display) -> Self {
        CliError { code: CHECK_FAILED, message: err.to_string() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<PottsError> for CliError {
    fn from(err: PottsError) -> Self {
        let code = match err {
            PottsError::Parse { .. }
            | PottsError::InvalidGraph(_)
            | PottsError::InvalidRoot { .. }
            | PottsError::InvalidColor { .. }
            | PottsError::DegreeExceeded { .. }
            | PottsError::InfeasibleRegular { .. }
            | PottsError::UnknownBound(_)
            | PottsError::Domain(_) => USAGE,
            PottsError::BudgetExceeded { .. } => RESOURCE,
            PottsError::CannotInterpolate(_) | PottsError::StepTooLarge { .. } => REGIME,
            PottsError::UndefinedMeasure
            | PottsError::ZeroRatio { .. }
            | PottsError::Branch { .. }
            | PottsError::Pole => CHECK_FAILED,
        };
        CliError { code, message: err.to_string() }
    }
}
