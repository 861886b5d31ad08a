//! Each command returns `Ok(true)` on success, `Ok(false)` when a check it
//! ran did not pass, and `Err` for anything that stopped it from running.

pub mod crypt;
pub mod demo;
pub mod entropy;
pub mod genpad;
pub mod verify;

use qpp_core::WordSize;

use crate::error::CliError;

pub type Outcome = Result<bool, CliError>;

fn word_size(n: u32) -> Result<WordSize, CliError> {
    WordSize::new(n).map_err(CliError::core)
}
