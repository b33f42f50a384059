use igt_core::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    /// 0 success, 1 input or precondition error, 2 computation cap, 3 internal invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Core(Error::CapExceeded { .. } | Error::RetryCapExceeded { .. }) => 2,
            CliError::Core(Error::Invariant(_)) => 3,
            CliError::Core(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            2 => "cap_exceeded",
            3 => "invariant_violation",
            _ => "input_error",
        }
    }
}
