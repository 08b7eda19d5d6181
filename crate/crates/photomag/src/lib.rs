//! Configuration, file formats, parallel sweeps and command-line front end
//! for the `photomag-core` photo-magnetic switching model.

pub mod commands;
pub mod config;
pub mod tables;
pub mod error;
pub mod pgm;
pub mod provenance;
pub mod sweep;

pub use config::RunConfig;
pub use error::{CliError, Result};
pub use sweep::Context;
