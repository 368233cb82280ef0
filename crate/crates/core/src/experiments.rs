//! Scripted experiments: linear validation, temporal and spatial refinement
//! ladders, and vanishing-parameter sweeps.

use alloc::boxed::Box;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use crate::field::{Dealias, SpectralField};
use crate::grid::PeriodicGrid;
use crate::model::{exact_linear_solution, ModelParams};
use crate::stepper::{evolve, Scheme, Trajectory};
use crate::{Complex, Error, Result};

/// Initial data `u₀(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialProfile {
    /// `amplitude · exp(-((x - center)/width)²)`, sampled as is (not periodized).
    Gaussian {
        center: f64,
        width: f64,
        amplitude: f64,
    },
}

impl InitialProfile {
    pub fn gaussian(center: f64) -> Self {
        InitialProfile::Gaussian {
            center,
            width: 1.0,
            amplitude: 1.0,
        }
    }

    pub fn eval(&self, x: f64) -> Complex {
        match *self {
            InitialProfile::Gaussian {
                center,
                width,
                amplitude,
            } => {
                let r = (x - center) / width;
                Complex::new(amplitude * (-r * r).exp(), 0.0)
            }
        }
    }

    pub fn sample(&self, grid: &PeriodicGrid) -> SpectralField {
        SpectralField::from_fn(grid, |x| self.eval(x))
    }

    fn validate(&self) -> Result<()> {
        match *self {
            InitialProfile::Gaussian {
                center,
                width,
                amplitude,
            } => {
                if !(center.is_finite() && amplitude.is_finite()) {
                    return Err(Error::invalid("u0 center and amplitude must be finite"));
                }
                if !(width.is_finite() && width > 0.0) {
                    return Err(Error::invalid("u0 width must be positive"));
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protocol {
    ValidateLinear,
    ConvergeTime,
    ConvergeSpace,
    LimitSweep,
}

impl Protocol {
    pub fn name(self) -> &'static str {
        match self {
            Protocol::ValidateLinear => "validate-linear",
            Protocol::ConvergeTime => "converge-time",
            Protocol::ConvergeSpace => "converge-space",
            Protocol::LimitSweep => "limit-sweep",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [
            Protocol::ValidateLinear,
            Protocol::ConvergeTime,
            Protocol::ConvergeSpace,
            Protocol::LimitSweep,
        ]
        .into_iter()
        .find(|p| p.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Eta,
    Beta,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Eta => "eta",
            SweepParam::Beta => "beta",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "eta" => Some(SweepParam::Eta),
            "beta" => Some(SweepParam::Beta),
            _ => None,
        }
    }

    fn apply(self, params: &ModelParams, value: f64) -> ModelParams {
        let mut p = *params;
        match self {
            SweepParam::Eta => p.eta = value,
            SweepParam::Beta => p.beta = value,
        }
        p
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

/// Sweep values used when a configuration does not list any.
pub const DEFAULT_SWEEP_VALUES: [f64; 6] = [1.0, 0.5, 0.1, 0.05, 0.01, 0.0];

pub const DEFAULT_SNAPSHOTS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub params: ModelParams,
    pub length: f64,
    pub points: usize,
    pub dt: f64,
    pub final_time: f64,
    pub u0: InitialProfile,
    /// Number of uniform snapshot intervals; `t = 0` is always recorded too.
    pub snapshots: usize,
    pub scheme: Scheme,
    pub dealias: Dealias,
    pub protocol: Option<Protocol>,
    pub levels: Option<usize>,
    pub sweep: Option<Sweep>,
}

impl ExperimentConfig {
    fn base(params: ModelParams, length: f64, points: usize, dt: f64, final_time: f64, u0: InitialProfile) -> Self {
        ExperimentConfig {
            params,
            length,
            points,
            dt,
            final_time,
            u0,
            snapshots: DEFAULT_SNAPSHOTS,
            scheme: Scheme::Cnab2,
            dealias: Dealias::Pad2,
            protocol: None,
            levels: None,
            sweep: None,
        }
    }

    /// Linear validation against the exact solution: `α = 0, γ = -1,
    /// η = β = 1`, `L = 100`, `N = 2¹⁰`, `Δt = 0.1`, `T = 10`, Gaussian at 30.
    pub fn linear_validation() -> Self {
        let p = ModelParams { alpha: 0.0, beta: 1.0, gamma: -1.0, eta: 1.0 };
        ExperimentConfig {
            protocol: Some(Protocol::ValidateLinear),
            levels: Some(4),
            ..Self::base(p, 100.0, 1024, 0.1, 10.0, InitialProfile::gaussian(30.0))
        }
    }

    /// Temporal refinement: `α = -1, β = γ = η = 0.5`, `L = 50`, `N = 2¹²`,
    /// `T = 1`, Gaussian at 25.
    pub fn temporal_convergence() -> Self {
        let p = ModelParams { alpha: -1.0, beta: 0.5, gamma: 0.5, eta: 0.5 };
        ExperimentConfig {
            protocol: Some(Protocol::ConvergeTime),
            levels: Some(5),
            ..Self::base(p, 50.0, 4096, 0.5, 1.0, InitialProfile::gaussian(25.0))
        }
    }

    /// Spatial refinement with `Δt = 10⁻⁴` on `[0, 0.05]`, starting at `N = 2⁵`.
    pub fn spatial_convergence() -> Self {
        let p = ModelParams { alpha: -1.0, beta: 0.5, gamma: 0.5, eta: 0.5 };
        ExperimentConfig {
            protocol: Some(Protocol::ConvergeSpace),
            levels: Some(6),
            ..Self::base(p, 50.0, 32, 1e-4, 0.05, InitialProfile::gaussian(25.0))
        }
    }

    /// Vanishing diffusion: `α = -1, β = γ = 0`, `L = 50`, `N = 2⁹`,
    /// `Δt = 0.015`, Gaussian at 25, swept over `η`.
    pub fn eta_limit() -> Self {
        let p = ModelParams { alpha: -1.0, beta: 0.0, gamma: 0.0, eta: 0.0 };
        ExperimentConfig {
            protocol: Some(Protocol::LimitSweep),
            sweep: Some(Sweep {
                param: SweepParam::Eta,
                values: DEFAULT_SWEEP_VALUES.to_vec(),
            }),
            ..Self::base(p, 50.0, 512, 0.015, LIMIT_FINAL_TIME, InitialProfile::gaussian(25.0))
        }
    }

    /// Vanishing dispersion: `α = -1, η = γ = 0`, `L = 100`, `N = 2¹⁰`,
    /// `Δt = 0.015`, Gaussian at 50, swept over `β`.
    pub fn beta_limit() -> Self {
        let p = ModelParams { alpha: -1.0, beta: 0.0, gamma: 0.0, eta: 0.0 };
        ExperimentConfig {
            protocol: Some(Protocol::LimitSweep),
            sweep: Some(Sweep {
                param: SweepParam::Beta,
                values: DEFAULT_SWEEP_VALUES.to_vec(),
            }),
            ..Self::base(p, 100.0, 1024, 0.015, LIMIT_FINAL_TIME, InitialProfile::gaussian(50.0))
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        PeriodicGrid::new(self.length, self.points)?;
        self.u0.validate()?;
        if !(self.final_time.is_finite() && self.final_time > 0.0) {
            return Err(Error::invalid("T must be positive"));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::invalid("dt must be positive"));
        }
        if self.dt > self.final_time {
            return Err(Error::invalid("dt exceeds T"));
        }
        self.steps()?;
        if self.snapshots == 0 {
            return Err(Error::invalid("snapshots must be at least 1"));
        }
        if let Some(levels) = self.levels {
            if levels < 2 {
                return Err(Error::invalid("levels must be at least 2"));
            }
        }
        if let Some(sweep) = &self.sweep {
            check_sweep_values(&sweep.values)?;
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<PeriodicGrid> {
        PeriodicGrid::new(self.length, self.points)
    }

    /// Number of steps of size `dt` covering `[0, T]`.
    pub fn steps(&self) -> Result<usize> {
        steps_for(self.final_time, self.dt)
    }

    /// Step indices of the uniform snapshot schedule, `0` and the last step included.
    pub fn snapshot_steps(&self) -> Result<Vec<usize>> {
        Ok(schedule(self.steps()?, self.snapshots))
    }

    pub fn initial_field(&self) -> Result<SpectralField> {
        Ok(self.u0.sample(&self.grid()?))
    }
}

/// Final time of the vanishing-parameter presets.
pub const LIMIT_FINAL_TIME: f64 = 0.75;

fn steps_for(final_time: f64, dt: f64) -> Result<usize> {
    let ratio = final_time / dt;
    let steps = ratio.round();
    if steps < 1.0 || (steps - ratio).abs() > 1e-9 * ratio {
        return Err(Error::invalid("T must be an integer multiple of dt"));
    }
    Ok(steps as usize)
}

fn schedule(steps: usize, intervals: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (0..=intervals)
        .map(|i| ((i * steps) as f64 / intervals as f64).round() as usize)
        .collect();
    out.dedup();
    out
}

fn check_sweep_values(values: &[f64]) -> Result<()> {
    if values.len() < 2 {
        return Err(Error::invalid("a sweep needs at least two values"));
    }
    if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::invalid("sweep values must be finite and non-negative"));
    }
    if values.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::invalid("sweep values must be strictly decreasing"));
    }
    Ok(())
}

/// Deterministic simulation of `config` on its own grid and snapshot schedule.
pub fn run_simulation(config: &ExperimentConfig) -> Result<Trajectory> {
    config.validate()?;
    let u0 = config.initial_field()?;
    let steps = config.steps()?;
    evolve(
        config.scheme,
        &config.params,
        &u0,
        config.dt,
        steps,
        &config.snapshot_steps()?,
        config.dealias,
    )
}

fn run_to_end(config: &ExperimentConfig, u0: &SpectralField, dt: f64) -> Result<SpectralField> {
    let steps = steps_for(config.final_time, dt)?;
    let tr = evolve(config.scheme, &config.params, u0, dt, steps, &[steps], config.dealias)?;
    Ok(tr.terminal().clone())
}

/// `λ_i = log₂(E_{i-1}/E_i)` for consecutive refinement errors.
pub fn observed_order(errors: &[f64]) -> Result<Vec<f64>> {
    if errors.len() < 2 {
        return Err(Error::invalid("need at least two errors"));
    }
    if let Some((index, &value)) = errors
        .iter()
        .enumerate()
        .find(|(_, e)| !(e.is_finite() && **e > 0.0))
    {
        return Err(Error::Degenerate { index, value });
    }
    Ok(errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvergenceKind {
    /// `Δt` halving, errors between consecutive runs.
    Time,
    /// `N` doubling, errors between consecutive runs on the coarser grid.
    Space,
    /// `Δt` halving, errors against the exact linear solution.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    /// `Δt` or `Δx` of the row.
    pub resolution: f64,
    pub abs_error: f64,
    pub rel_error: f64,
    /// Undefined on the first row.
    pub order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub kind: ConvergenceKind,
    pub rows: Vec<ConvergenceRow>,
    pub config: ExperimentConfig,
}

impl ConvergenceReport {
    /// Assembles rows from `(resolution, abs_error, reference_sup)` triples.
    pub fn from_errors(
        kind: ConvergenceKind,
        config: &ExperimentConfig,
        entries: &[(f64, f64, f64)],
    ) -> Result<Self> {
        let errors: Vec<f64> = entries.iter().map(|e| e.1).collect();
        let orders = observed_order(&errors)?;
        let rows = entries
            .iter()
            .enumerate()
            .map(|(i, &(resolution, abs_error, reference))| ConvergenceRow {
                resolution,
                abs_error,
                rel_error: abs_error / reference,
                order: i.checked_sub(1).map(|j| orders[j]),
            })
            .collect();
        Ok(ConvergenceReport {
            kind,
            rows,
            config: config.clone(),
        })
    }

    pub fn orders(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.order).collect()
    }

    pub fn errors(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.abs_error).collect()
    }
}

fn check_levels(levels: usize) -> Result<()> {
    if levels < 2 {
        return Err(Error::invalid("levels must be at least 2"));
    }
    Ok(())
}

/// Runs `Δt = T/2, T/4, …, T/2^{levels+1}` on the configured grid and reports
/// `‖U_{Δt} - U_{Δt/2}‖_∞` over the collocation points at `T`.
pub fn converge_time(config: &ExperimentConfig, levels: usize) -> Result<ConvergenceReport> {
    config.validate()?;
    check_levels(levels)?;
    let u0 = config.initial_field()?;
    let runs = (0..=levels)
        .map(|i| {
            let dt = config.final_time / (1u64 << (i + 1)) as f64;
            run_to_end(config, &u0, dt).map(|u| (dt, u))
        })
        .collect::<Result<Vec<_>>>()?;
    let entries = runs
        .windows(2)
        .map(|pair| {
            let (dt, coarse) = &pair[0];
            let (_, fine) = &pair[1];
            Ok((*dt, coarse.sup_distance(fine)?, coarse.sup_norm()))
        })
        .collect::<Result<Vec<_>>>()?;
    ConvergenceReport::from_errors(ConvergenceKind::Time, config, &entries)
}

/// Runs `N, 2N, …, 2^{levels} N` at fixed `Δt` and reports the sup-distance
/// between consecutive runs at the coarser grid's points, the finer run being
/// restricted by coefficient truncation.
pub fn converge_space(config: &ExperimentConfig, levels: usize) -> Result<ConvergenceReport> {
    config.validate()?;
    check_levels(levels)?;
    let base = config.grid()?;
    let runs = (0..=levels)
        .map(|i| {
            let grid = base.with_points(config.points << i)?;
            let u0 = config.u0.sample(&grid);
            run_to_end(config, &u0, config.dt)
        })
        .collect::<Result<Vec<_>>>()?;
    let entries = runs
        .windows(2)
        .map(|pair| {
            let coarse = &pair[0];
            let fine = pair[1].truncate(coarse.grid().points())?;
            Ok((coarse.grid().dx(), coarse.sup_distance(&fine)?, coarse.sup_norm()))
        })
        .collect::<Result<Vec<_>>>()?;
    ConvergenceReport::from_errors(ConvergenceKind::Space, config, &entries)
}

/// Stepped and exact solutions of the linear problem.
#[derive(Debug, Clone)]
pub struct LinearValidation {
    pub report: ConvergenceReport,
    /// Terminal field of the run at the configured `dt`.
    pub stepped: SpectralField,
    pub exact: SpectralField,
}

/// Compares runs at `dt, dt/2, …, dt/2^{levels-1}` with the exact solution at `T`.
pub fn validate_linear(config: &ExperimentConfig, levels: usize) -> Result<LinearValidation> {
    config.validate()?;
    check_levels(levels)?;
    let u0 = config.initial_field()?;
    let exact = exact_linear_solution(&config.params, &u0, config.final_time)?;
    let exact_sup = exact.sup_norm();
    let mut entries = Vec::with_capacity(levels);
    let mut stepped = None;
    for i in 0..levels {
        let dt = config.dt / (1u64 << i) as f64;
        let u = run_to_end(config, &u0, dt)?;
        entries.push((dt, u.sup_distance(&exact)?, exact_sup));
        stepped.get_or_insert(u);
    }
    Ok(LinearValidation {
        report: ConvergenceReport::from_errors(ConvergenceKind::Exact, config, &entries)?,
        stepped: stepped.expect("levels >= 2"),
        exact,
    })
}

#[derive(Debug, Clone)]
pub struct LimitReport {
    pub param: SweepParam,
    pub values: Vec<f64>,
    /// Smallest swept value, the run every other run is compared against.
    pub reference: f64,
    /// `sup_t ‖u_{v_i}(t) - u_{ref}(t)‖_0` over the snapshot schedule.
    pub distances: Vec<f64>,
    pub runs: Vec<Trajectory>,
}

impl LimitReport {
    /// Least-squares slope `p` of `ln d` against `ln(v - v_ref)`, over
    /// entries with `v > v_ref`; `None` with fewer than two such entries.
    pub fn fitted_exponent(&self) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .values
            .iter()
            .zip(&self.distances)
            .filter(|(v, d)| **v > self.reference && **d > 0.0)
            .map(|(v, d)| ((v - self.reference).ln(), d.ln()))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        Some(sxy / sxx)
    }
}

/// `sup_t ‖a(t) - b(t)‖_0` over matching snapshots.
pub fn trajectory_distance(a: &Trajectory, b: &Trajectory) -> Result<f64> {
    if a.times != b.times {
        return Err(Error::invalid("trajectories use different snapshot times"));
    }
    a.snapshots
        .iter()
        .zip(&b.snapshots)
        .try_fold(0.0f64, |acc, (x, y)| Ok(acc.max(x.l2_distance(y)?)))
}

/// One run per value of `param` with everything else fixed; distances are
/// taken against the run at the smallest (last) value.
pub fn limit_sweep(config: &ExperimentConfig, param: SweepParam, values: &[f64]) -> Result<LimitReport> {
    config.validate()?;
    check_sweep_values(values)?;
    let runs = values
        .iter()
        .map(|&value| {
            let mut cfg = config.clone();
            cfg.params = param.apply(&config.params, value);
            run_simulation(&cfg).map_err(|e| Error::Sweep {
                param: param.name(),
                value,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let reference = runs.last().expect("at least two values");
    let distances = runs
        .iter()
        .map(|r| trajectory_distance(r, reference))
        .collect::<Result<Vec<_>>>()?;
    Ok(LimitReport {
        param,
        values: values.to_vec(),
        reference: *values.last().expect("at least two values"),
        distances,
        runs,
    })
}
