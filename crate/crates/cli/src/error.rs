use std::path::PathBuf;

use thiserror::Error;

/// Exit status when every check passed.
pub const EXIT_PASS: i32 = 0;
/// A mathematical check failed.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Unreadable or invalid input.
pub const EXIT_INPUT: i32 = 2;
/// A configuration guard rejected the run.
pub const EXIT_GUARD: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Guard(String),
    #[error(transparent)]
    Core(#[from] sharpmin_core::Error),
}

impl CliError {
    pub fn parse(path: &std::path::Path, e: serde_json::Error) -> Self {
        CliError::Parse {
            path: path.to_path_buf(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        use sharpmin_core::Error as E;
        match self {
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Usage(_) => EXIT_INPUT,
            CliError::Guard(_) => EXIT_GUARD,
            CliError::Core(e) => match e {
                E::Disagreement { .. } => EXIT_CHECK_FAILED,
                E::DualRangeTooSmall { .. }
                | E::InfeasibleConstant { .. }
                | E::Precondition(_)
                | E::OutOfRange { .. }
                | E::NoGeodesicOracle(_) => EXIT_GUARD,
                _ => EXIT_INPUT,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
