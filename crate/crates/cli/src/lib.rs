//! Library side of the `centers` command: input parsing, report formatting
//! and the experiment harness, shared by the binary and the test targets.

pub mod bench;
pub mod compute;
pub mod error;
pub mod format;
pub mod input;

pub use error::{CliError, CliResult};
