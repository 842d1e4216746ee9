//! File formats, the self-check suite and the command implementations behind
//! the `multipole` binary.

pub mod checks;
pub mod commands;
pub mod error;
pub mod formats;

pub use error::{CliError, Status};
