use thiserror::Error;

/// Exit code for a check that holds, or a successful command.
pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
/// Bad arguments or unreadable input files.
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;
pub const EXIT_REPLAY_MISMATCH: i32 = 4;
/// An internal consistency check tripped.
pub const EXIT_INTERNAL: i32 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Core(#[from] cotorsion_core::Error),

    #[error("replay mismatch: {0}")]
    Replay(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use cotorsion_core::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io(..) | CliError::Json(_) => EXIT_USAGE,
            CliError::Replay(_) => EXIT_REPLAY_MISMATCH,
            CliError::Core(e) => match e {
                E::InvalidPresentation(_) | E::UnknownIndecomposable(_) | E::Parse(_) => EXIT_USAGE,
                E::ReplayMismatch(_) => EXIT_REPLAY_MISMATCH,
                _ => EXIT_INTERNAL,
            },
        }
    }
}
