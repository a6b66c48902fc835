use hilbert_tensor::HilbertError;
use thiserror::Error;

/// Failure modes of a CLI run, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Rejected parameters or ranges.
    #[error("{0}")]
    Validation(String),

    /// Unreadable or malformed input file.
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Input(_) => 3,
        }
    }
}

impl From<HilbertError> for CliError {
    fn from(e: HilbertError) -> Self {
        match e {
            HilbertError::ExcludedShift(a) => CliError::Validation(shift_message(a)),
            other => CliError::Validation(other.to_string()),
        }
    }
}

pub fn shift_message(a: f64) -> String {
    format!("invalid shift a = {a}: a must lie in ℝ∖ℤ⁻ (a ∉ {{0, -1, -2, …}})")
}

pub type CliResult<T> = std::result::Result<T, CliError>;
