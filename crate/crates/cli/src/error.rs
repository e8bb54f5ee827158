use std::path::{Path, PathBuf};

/// Command failure, split by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, unreadable or malformed inputs. Exit code 2.
    #[error("{0}")]
    Usage(String),
    /// Anything else, including failed writes. Exit code 1.
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 1,
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Usage(message.into())
    }

    /// Format error located in an input file.
    pub fn format(path: &Path, message: impl std::fmt::Display) -> Self {
        CliError::Usage(format!("{}: {message}", path.display()))
    }

    pub fn write(path: &Path, err: std::io::Error) -> Self {
        CliError::Internal(format!("cannot write {}: {err}", path.display()))
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Path plus the manifest path written next to it.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}
