use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "dnls-1";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Record of one CLI invocation, written as `manifest.json` next to its
/// outputs. `files` lists every other file the invocation created.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema: String,
    pub command: String,
    pub config: serde_json::Value,
    pub files: Vec<String>,
    pub duration_seconds: f64,
    pub platform: Platform,
    pub scheme: String,
    pub solver: String,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Platform {
    pub os: String,
    pub arch: String,
    pub family: String,
}

impl Platform {
    pub fn current() -> Self {
        Platform {
            os: std::env::consts::OS.to_owned(),
            arch: std::env::consts::ARCH.to_owned(),
            family: std::env::consts::FAMILY.to_owned(),
        }
    }
}

pub fn solver_id() -> String {
    format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"))
}
