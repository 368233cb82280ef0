//! File formats and command-line driver for `dnls-core`.

pub mod commands;
pub mod config;
pub mod manifest;
pub mod output;

pub use commands::{execute, CliError, Invocation};
pub use config::{config_to_json, parse_config, ConfigError};
pub use manifest::RunManifest;
