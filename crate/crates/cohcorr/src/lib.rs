//! File formats, sweeps, verification campaigns and the command-line front
//! end for [`cohcorr_core`].

pub mod analyze;
pub mod campaign;
pub mod cli;
mod error;
pub mod format;
pub mod io;
pub mod sweep;

pub use error::CliError;
