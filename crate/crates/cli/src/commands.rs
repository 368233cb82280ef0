use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use dnls_core::experiments::{
    converge_space, converge_time, limit_sweep, run_simulation, validate_linear, ExperimentConfig,
    Protocol, Sweep, SweepParam, DEFAULT_SWEEP_VALUES,
};
use dnls_core::{Scheme, Trajectory};

use crate::config::{config_to_json, parse_config, ConfigError};
use crate::manifest::{solver_id, Platform, RunManifest, MANIFEST_FILE, SCHEMA};
use crate::output::{emit, write_convergence, write_fields, write_limit, write_snapshots, OutputError};

pub const CONVERGENCE_FILE: &str = "convergence.csv";
pub const SNAPSHOT_FILE: &str = "snapshots.csv";
pub const LIMIT_FILE: &str = "limit.csv";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Config {
        path: PathBuf,
        #[source]
        source: ConfigError,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Solver(#[from] dnls_core::Error),
    #[error(transparent)]
    Output(#[from] OutputError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config { .. } | CliError::Usage(_) => 2,
            CliError::Solver(e) if e.is_blow_up() => 3,
            CliError::Solver(dnls_core::Error::InvalidInput(_)) => 2,
            CliError::Solver(_) | CliError::Output(_) => 1,
        }
    }
}

/// What to run. `None` follows the config's own `protocol` key.
#[derive(Debug, Clone, Default)]
pub struct Invocation {
    pub protocol: Option<Protocol>,
    pub config: PathBuf,
    pub out: PathBuf,
    pub scheme: Option<Scheme>,
    pub levels: Option<usize>,
    pub param: Option<SweepParam>,
    pub values: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub quiet: bool,
}

pub fn default_levels(protocol: Protocol) -> usize {
    match protocol {
        Protocol::ValidateLinear => 4,
        Protocol::ConvergeTime => 5,
        Protocol::ConvergeSpace => 6,
        Protocol::LimitSweep => 0,
    }
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    parse_config(&text).map_err(|source| CliError::Config {
        path: path.to_owned(),
        source,
    })
}

/// Applies command-line overrides on top of the file config.
pub fn resolve(inv: &Invocation) -> Result<ExperimentConfig, CliError> {
    let mut config = load_config(&inv.config)?;
    if let Some(p) = inv.protocol {
        config.protocol = Some(p);
    }
    if let Some(s) = inv.scheme {
        config.scheme = s;
    }
    if inv.levels.is_some() {
        config.levels = inv.levels;
    }
    if inv.param.is_some() || inv.values.is_some() {
        let param = inv
            .param
            .or(config.sweep.as_ref().map(|s| s.param))
            .ok_or_else(|| CliError::Usage("--values needs --param or a sweep in the config".into()))?;
        let values = inv
            .values
            .clone()
            .or(config.sweep.as_ref().map(|s| s.values.clone()))
            .unwrap_or_else(|| DEFAULT_SWEEP_VALUES.to_vec());
        config.sweep = Some(Sweep { param, values });
    }
    if config.protocol == Some(Protocol::LimitSweep) && config.sweep.is_none() {
        return Err(CliError::Usage("limit needs --param or a sweep in the config".into()));
    }
    config.validate().map_err(|e| CliError::Usage(format!("invalid overrides: {e}")))?;
    Ok(config)
}

/// Runs the experiment and writes its CSVs plus `manifest.json` into `inv.out`.
pub fn execute(command: &str, inv: &Invocation) -> Result<RunManifest, CliError> {
    let start = Instant::now();
    let config = resolve(inv)?;
    fs::create_dir_all(&inv.out).map_err(|source| OutputError {
        path: inv.out.clone(),
        source,
    })?;
    let out = inv.out.as_path();
    let say = |msg: String| {
        if !inv.quiet {
            eprintln!("{msg}");
        }
    };

    let mut files = Vec::new();
    match config.protocol {
        None => {
            let tr = run_simulation(&config)?;
            files.push(emit(out, SNAPSHOT_FILE, |w| write_snapshots(w, &[("run".into(), &tr)]))?);
            say(format!("run: {} snapshots to t = {}", tr.len(), tr.final_time()));
        }
        Some(Protocol::ValidateLinear) => {
            let levels = config.levels.unwrap_or(default_levels(Protocol::ValidateLinear));
            let v = validate_linear(&config, levels)?;
            files.push(emit(out, CONVERGENCE_FILE, |w| write_convergence(w, &v.report))?);
            let t = config.final_time;
            files.push(emit(out, SNAPSHOT_FILE, |w| {
                write_fields(w, &[("numerical", t, &v.stepped), ("exact", t, &v.exact)])
            })?);
            say(format!("validate-linear: errors {:?}", v.report.errors()));
        }
        Some(p @ (Protocol::ConvergeTime | Protocol::ConvergeSpace)) => {
            let levels = config.levels.unwrap_or(default_levels(p));
            let report = if p == Protocol::ConvergeTime {
                converge_time(&config, levels)?
            } else {
                converge_space(&config, levels)?
            };
            files.push(emit(out, CONVERGENCE_FILE, |w| write_convergence(w, &report))?);
            say(format!("{}: orders {:?}", p.name(), report.orders()));
        }
        Some(Protocol::LimitSweep) => {
            let sweep = config.sweep.clone().expect("checked in resolve");
            let report = limit_sweep(&config, sweep.param, &sweep.values)?;
            files.push(emit(out, LIMIT_FILE, |w| write_limit(w, &report))?);
            let labelled: Vec<(String, &Trajectory)> = report
                .values
                .iter()
                .zip(&report.runs)
                .map(|(v, tr)| (format!("{}={v}", sweep.param.name()), tr))
                .collect();
            files.push(emit(out, SNAPSHOT_FILE, |w| write_snapshots(w, &labelled))?);
            match report.fitted_exponent() {
                Some(p) => say(format!("limit: distances {:?}, fitted exponent {p:.4}", report.distances)),
                None => say(format!("limit: distances {:?}", report.distances)),
            }
        }
    }

    let manifest = RunManifest {
        schema: SCHEMA.to_owned(),
        command: command.to_owned(),
        config: config_to_json(&config),
        files,
        duration_seconds: start.elapsed().as_secs_f64(),
        platform: Platform::current(),
        scheme: config.scheme.name().to_owned(),
        solver: solver_id(),
        seed: inv.seed,
    };
    emit(out, MANIFEST_FILE, |mut w| {
        serde_json::to_writer_pretty(&mut w, &manifest)?;
        std::io::Write::write_all(&mut w, b"\n")
    })?;
    Ok(manifest)
}
