use std::fmt;
use std::io;
use std::path::Path;

use qpp_core::padfile::FormatError;

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    /// A verification suite or demo check did not pass.
    pub const CHECK_FAILED: u8 = 1;
    /// Bad command line (reported by clap).
    pub const USAGE: u8 = 2;
    /// Key material missing or too short.
    pub const KEY: u8 = 3;
    /// Pad file invalid, or pad does not match the container.
    pub const PAD: u8 = 4;
    /// Reading or writing a file failed.
    pub const IO: u8 = 5;
    /// Ciphertext container malformed.
    pub const FORMAT: u8 = 6;
    /// Parameters out of range for the requested operation.
    pub const PARAM: u8 = 7;
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    pub fn io(path: &Path, err: io::Error) -> Self {
        Self::new(exit::IO, format!("{}: {err}", path.display()))
    }

    pub fn pad(path: &Path, err: FormatError) -> Self {
        match err {
            FormatError::Io(e) => Self::io(path, e),
            other => Self::new(exit::PAD, format!("pad {}: {other}", path.display())),
        }
    }

    pub fn container(path: &Path, err: FormatError) -> Self {
        match err {
            FormatError::Io(e) => Self::io(path, e),
            other => Self::new(exit::FORMAT, format!("container {}: {other}", path.display())),
        }
    }

    pub fn core(err: qpp_core::Error) -> Self {
        let code = if err.is_key_error() {
            exit::KEY
        } else if matches!(err, qpp_core::Error::WordSizeMismatch { .. }) {
            exit::PAD
        } else {
            exit::PARAM
        };
        Self::new(code, err.to_string())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<qpp_core::Error> for CliError {
    fn from(err: qpp_core::Error) -> Self {
        Self::core(err)
    }
}
