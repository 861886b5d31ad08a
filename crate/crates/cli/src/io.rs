use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use crate::error::CliError;

pub fn is_stdio(path: &Path) -> bool {
    path.as_os_str() == "-"
}

pub fn read_all(path: &Path) -> Result<Vec<u8>, CliError> {
    if is_stdio(path) {
        let mut buf = Vec::new();
        io::stdin()
            .lock()
            .read_to_end(&mut buf)
            .map_err(|e| CliError::io(path, e))?;
        Ok(buf)
    } else {
        fs::read(path).map_err(|e| CliError::io(path, e))
    }
}

pub fn write_all(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if is_stdio(path) {
        let mut out = io::stdout().lock();
        out.write_all(bytes)
            .and_then(|_| out.flush())
            .map_err(|e| CliError::io(path, e))
    } else {
        fs::write(path, bytes).map_err(|e| CliError::io(path, e))
    }
}
