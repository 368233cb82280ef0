//! JSON experiment configuration.
//!
//! ```json
//! {
//!   "alpha": 0, "beta": 1, "gamma": -1, "eta": 1,
//!   "L": 100, "N": 1024, "dt": 0.1, "T": 10,
//!   "u0": { "type": "gaussian", "center": 30, "width": 1 }
//! }
//! ```
//!
//! Optional keys: `protocol`, `scheme` (default `cnab2`), `sweep`
//! (`{ "param": "eta" | "beta", "values": [...] }`), `snapshots` (default 10),
//! `dealias` (`pad2` | `none`, default `pad2`), `levels`, `u0.amplitude`
//! (default 1), `u0.width` (default 1).

use dnls_core::experiments::{
    ExperimentConfig, InitialProfile, Protocol, Sweep, SweepParam, DEFAULT_SNAPSHOTS,
    DEFAULT_SWEEP_VALUES,
};
use dnls_core::{Dealias, ModelParams, PeriodicGrid, Scheme};
use serde::{Deserialize, Serialize};

pub const REQUIRED_KEYS: [&str; 9] = ["alpha", "beta", "gamma", "eta", "L", "N", "dt", "T", "u0"];

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("config is not valid JSON: {0}")]
    Syntax(#[source] serde_json::Error),
    #[error("config must be a JSON object")]
    NotAnObject,
    #[error("missing required keys: {}", .0.join(", "))]
    Missing(Vec<&'static str>),
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

fn invalid(path: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        path: path.to_owned(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDoc {
    alpha: f64,
    beta: f64,
    gamma: f64,
    eta: f64,
    #[serde(rename = "L")]
    length: f64,
    #[serde(rename = "N")]
    points: usize,
    dt: f64,
    #[serde(rename = "T")]
    final_time: f64,
    u0: InitialDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    protocol: Option<String>,
    #[serde(default = "default_scheme")]
    scheme: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sweep: Option<SweepDoc>,
    #[serde(default = "default_snapshots")]
    snapshots: usize,
    #[serde(default = "default_dealias")]
    dealias: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    levels: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InitialDoc {
    #[serde(rename = "type")]
    kind: String,
    center: f64,
    #[serde(default = "one")]
    width: f64,
    #[serde(default = "one")]
    amplitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepDoc {
    param: String,
    #[serde(default = "default_sweep_values")]
    values: Vec<f64>,
}

fn default_scheme() -> String {
    Scheme::default().name().to_owned()
}

fn default_snapshots() -> usize {
    DEFAULT_SNAPSHOTS
}

fn default_dealias() -> String {
    dealias_name(Dealias::default()).to_owned()
}

fn default_sweep_values() -> Vec<f64> {
    DEFAULT_SWEEP_VALUES.to_vec()
}

fn one() -> f64 {
    1.0
}

pub fn dealias_name(d: Dealias) -> &'static str {
    match d {
        Dealias::Pad2 => "pad2",
        Dealias::None => "none",
    }
}

pub fn dealias_from_name(name: &str) -> Option<Dealias> {
    match name {
        "pad2" => Some(Dealias::Pad2),
        "none" => Some(Dealias::None),
        _ => None,
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(ConfigError::Syntax)?;
    let object = value.as_object().ok_or(ConfigError::NotAnObject)?;
    let missing: Vec<&'static str> = REQUIRED_KEYS
        .iter()
        .copied()
        .filter(|k| !object.contains_key(*k))
        .collect();
    if !missing.is_empty() {
        return Err(ConfigError::Missing(missing));
    }
    let doc: ConfigDoc = serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        invalid(&path, e.into_inner().to_string())
    })?;
    doc.into_config()
}

/// Serializes a configuration so that [`parse_config`] returns it unchanged.
pub fn config_to_json(config: &ExperimentConfig) -> serde_json::Value {
    serde_json::to_value(ConfigDoc::from_config(config)).expect("config document is plain data")
}

impl ConfigDoc {
    fn from_config(c: &ExperimentConfig) -> Self {
        let InitialProfile::Gaussian {
            center,
            width,
            amplitude,
        } = c.u0;
        ConfigDoc {
            alpha: c.params.alpha,
            beta: c.params.beta,
            gamma: c.params.gamma,
            eta: c.params.eta,
            length: c.length,
            points: c.points,
            dt: c.dt,
            final_time: c.final_time,
            u0: InitialDoc {
                kind: "gaussian".to_owned(),
                center,
                width,
                amplitude,
            },
            protocol: c.protocol.map(|p| p.name().to_owned()),
            scheme: c.scheme.name().to_owned(),
            sweep: c.sweep.as_ref().map(|s| SweepDoc {
                param: s.param.name().to_owned(),
                values: s.values.clone(),
            }),
            snapshots: c.snapshots,
            dealias: dealias_name(c.dealias).to_owned(),
            levels: c.levels,
        }
    }

    fn into_config(self) -> Result<ExperimentConfig, ConfigError> {
        let params = ModelParams::new(self.alpha, self.beta, self.gamma, self.eta)
            .map_err(|e| invalid("eta", e.to_string()))?;
        if self.length <= 0.0 {
            return Err(invalid("L", "must be positive"));
        }
        PeriodicGrid::new(self.length, self.points).map_err(|e| invalid("N", e.to_string()))?;
        if self.u0.kind != "gaussian" {
            return Err(invalid("u0.type", format!("unknown profile `{}` (expected gaussian)", self.u0.kind)));
        }
        if self.u0.width <= 0.0 {
            return Err(invalid("u0.width", "must be positive"));
        }
        if self.dt <= 0.0 {
            return Err(invalid("dt", "must be positive"));
        }
        if self.final_time <= 0.0 {
            return Err(invalid("T", "must be positive"));
        }
        if self.dt > self.final_time {
            return Err(invalid("dt", "dt exceeds T"));
        }
        let protocol = self
            .protocol
            .map(|p| Protocol::from_name(&p).ok_or_else(|| invalid("protocol", format!("unknown protocol `{p}`"))))
            .transpose()?;
        let scheme = Scheme::from_name(&self.scheme)
            .ok_or_else(|| invalid("scheme", format!("unknown scheme `{}`", self.scheme)))?;
        let dealias = dealias_from_name(&self.dealias)
            .ok_or_else(|| invalid("dealias", format!("unknown dealiasing `{}`", self.dealias)))?;
        let sweep = self
            .sweep
            .map(|s| {
                let param = SweepParam::from_name(&s.param)
                    .ok_or_else(|| invalid("sweep.param", format!("unknown parameter `{}`", s.param)))?;
                Ok(Sweep {
                    param,
                    values: s.values,
                })
            })
            .transpose()?;
        let config = ExperimentConfig {
            params,
            length: self.length,
            points: self.points,
            dt: self.dt,
            final_time: self.final_time,
            u0: InitialProfile::Gaussian {
                center: self.u0.center,
                width: self.u0.width,
                amplitude: self.u0.amplitude,
            },
            snapshots: self.snapshots,
            scheme,
            dealias,
            protocol,
            levels: self.levels,
            sweep,
        };
        config.validate().map_err(|e| {
            let path = match () {
                _ if config.snapshots == 0 => "snapshots",
                _ if config.levels.is_some_and(|l| l < 2) => "levels",
                _ if config.sweep.is_some() && config.steps().is_ok() => "sweep.values",
                _ => "T",
            };
            invalid(path, e.to_string())
        })?;
        Ok(config)
    }
}
