use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] nimfa_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for configuration problems, 3 for capacity, 4 for numerical
    /// failure and 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use nimfa_core::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Core(E::InvalidParameter(_) | E::DimensionMismatch { .. } | E::Unsupported(_) | E::Parse(_)) => 2,
            CliError::Core(E::Capacity(_)) => 3,
            CliError::Core(E::Numerical(_)) => 4,
            CliError::Core(E::Io(_)) | CliError::Io(_) => 1,
        }
    }
}
