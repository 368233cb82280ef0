//! Time integration.
//!
//! Three routes to the same solution:
//!
//! * [`StepperState::cnab2_bootstrap`] / [`StepperState::step`] with
//!   [`Scheme::Cnab2`]: Crank–Nicolson on the linear part, two-step
//!   Adams–Bashforth on `α w_k Ĉ_k`. Per mode,
//!   `û^{n+1} = [(i/Δt - m/2) û^n + α w (3/2 Ĉ^n - 1/2 Ĉ^{n-1})] / (i/Δt + m/2)`.
//! * [`Scheme::Etd2`]: linear part advanced exactly by `e^{σΔt}`, nonlinear
//!   part by second-order exponential time differencing.
//! * [`picard_solve`]: fixed-point iteration on the mild form
//!   `u(t) = 𝒯(t)u₀ + ∫₀ᵗ 𝒯(t-ξ) F(u(ξ)) dξ`.
//!
//! Both multistep schemes are started by a predictor–corrector step: a
//! predictor with the nonlinearity frozen at `t = 0`, then a corrector that
//! integrates the nonlinearity linearly between `Ĉ⁰` and the predicted `Ĉ¹`.
//! The start-up step has O(Δt³) local error, so it leaves no O(Δt²) offset in
//! conserved quantities.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use crate::field::{cubic, Dealias, SpectralField};
use crate::grid::PeriodicGrid;
use crate::model::{linear_symbol, nonlinear_term, ModelParams};
use crate::{Complex, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    #[default]
    Cnab2,
    Etd2,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Cnab2 => "cnab2",
            Scheme::Etd2 => "etd2",
        }
    }

    pub fn from_name(name: &str) -> Option<Scheme> {
        match name {
            "cnab2" => Some(Scheme::Cnab2),
            "etd2" => Some(Scheme::Etd2),
            _ => None,
        }
    }
}

/// Per-mode coefficients of one step, applied to the cubic spectrum `Ĉ`:
/// `û^{n+1} = linear·û^n + current·Ĉ^n + previous·Ĉ^{n-1}`.
///
/// Start-up: predictor `û* = linear·û⁰ + first·Ĉ⁰`, corrector
/// `û¹ = û* + correct·(Ĉ(û*) - Ĉ⁰)`.
#[derive(Debug, Clone)]
struct Factors {
    linear: Vec<Complex>,
    current: Vec<Complex>,
    previous: Vec<Complex>,
    first: Vec<Complex>,
    correct: Vec<Complex>,
}

impl Factors {
    fn cnab2(params: &ModelParams, grid: &PeriodicGrid, dt: f64) -> Self {
        let n = grid.points();
        let mut f = Factors::with_capacity(n);
        let i_dt = Complex::new(0.0, 1.0 / dt);
        for w in grid.wavenumbers() {
            let m = params.dispersion(w);
            // Im(i/Δt + m/2) = 1/Δt + ηw²/2 > 0
            let denom = i_dt + m * 0.5;
            let force = params.alpha * w / denom;
            f.linear.push((i_dt - m * 0.5) / denom);
            f.current.push(force * 1.5);
            f.previous.push(force * -0.5);
            f.first.push(force);
            f.correct.push(force * 0.5);
        }
        f
    }

    fn etd2(params: &ModelParams, grid: &PeriodicGrid, dt: f64) -> Self {
        let n = grid.points();
        let mut f = Factors::with_capacity(n);
        let sym = linear_symbol(params, grid);
        for (w, sigma) in grid.wavenumbers().into_iter().zip(sym.rates()) {
            let z = sigma * dt;
            let (p1, p2) = phi12(z);
            // F̂ = -iαw Ĉ
            let to_f = Complex::new(0.0, -params.alpha * w) * dt;
            f.linear.push(z.exp());
            f.current.push(to_f * (p1 + p2));
            f.previous.push(-to_f * p2);
            f.first.push(to_f * p1);
            f.correct.push(to_f * p2);
        }
        f
    }

    fn with_capacity(n: usize) -> Self {
        Factors {
            linear: Vec::with_capacity(n),
            current: Vec::with_capacity(n),
            previous: Vec::with_capacity(n),
            first: Vec::with_capacity(n),
            correct: Vec::with_capacity(n),
        }
    }
}

/// `φ₁(z) = (e^z - 1)/z` and `φ₂(z) = (e^z - 1 - z)/z²`.
pub fn phi12(z: Complex) -> (Complex, Complex) {
    if z.norm() < 1e-2 {
        // φ_j(z) = Σ_m z^m / (m + j)!
        let mut p1 = Complex::new(0.0, 0.0);
        let mut p2 = Complex::new(0.0, 0.0);
        let mut power = Complex::new(1.0, 0.0);
        let mut fact1 = 1.0; // (m + 1)!
        for m in 0..10 {
            let fact2 = fact1 * (m + 2) as f64;
            p1 += power / fact1;
            p2 += power / fact2;
            power *= z;
            fact1 = fact2;
        }
        (p1, p2)
    } else {
        let e = z.exp();
        let one = Complex::new(1.0, 0.0);
        ((e - one) / z, (e - one - z) / (z * z))
    }
}

/// State of a two-step integrator.
#[derive(Debug, Clone)]
pub struct StepperState {
    scheme: Scheme,
    params: ModelParams,
    dealias: Dealias,
    dt: f64,
    step: usize,
    current: SpectralField,
    prev_cubic: SpectralField,
    factors: Factors,
}

impl StepperState {
    /// Advances `u0` to step 1: a Crank–Nicolson predictor with the
    /// nonlinearity frozen at `t = 0`, then a corrector with the trapezoidal
    /// average `(Ĉ⁰ + Ĉ*)/2`. For `α = 0` this is the plain Cayley step.
    pub fn cnab2_bootstrap(
        params: &ModelParams,
        u0: &SpectralField,
        dt: f64,
        dealias: Dealias,
    ) -> Result<Self> {
        Self::bootstrap(Scheme::Cnab2, params, u0, dt, dealias)
    }

    /// ETD2RK first step: exponential Euler predictor, `φ₂` corrector.
    pub fn etd2_bootstrap(
        params: &ModelParams,
        u0: &SpectralField,
        dt: f64,
        dealias: Dealias,
    ) -> Result<Self> {
        Self::bootstrap(Scheme::Etd2, params, u0, dt, dealias)
    }

    pub fn bootstrap(
        scheme: Scheme,
        params: &ModelParams,
        u0: &SpectralField,
        dt: f64,
        dealias: Dealias,
    ) -> Result<Self> {
        params.validate()?;
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::invalid("time step must be finite and positive"));
        }
        let grid = u0.grid();
        let factors = match scheme {
            Scheme::Cnab2 => Factors::cnab2(params, grid, dt),
            Scheme::Etd2 => Factors::etd2(params, grid, dt),
        };
        let cube = cubic(u0, dealias);
        let predicted: Vec<Complex> = u0
            .coeffs()
            .iter()
            .zip(cube.coeffs())
            .zip(factors.linear.iter().zip(&factors.first))
            .map(|((u, c), (lin, first))| lin * u + first * c)
            .collect();
        let mut current = SpectralField::from_coeffs(grid, predicted)?;
        if current.is_finite() {
            let cube_star = cubic(&current, dealias);
            for (slot, u) in current.coeffs_mut().iter_mut().enumerate() {
                *u += factors.correct[slot] * (cube_star.coeffs()[slot] - cube.coeffs()[slot]);
            }
        }
        if !current.is_finite() {
            return Err(Error::BlowUp { step: 1, time: dt });
        }
        Ok(StepperState {
            scheme,
            params: *params,
            dealias,
            dt,
            step: 1,
            current,
            prev_cubic: cube,
            factors,
        })
    }

    /// One step of the configured scheme.
    pub fn step(&mut self) -> Result<()> {
        let cube = cubic(&self.current, self.dealias);
        let f = &self.factors;
        for (slot, u) in self.current.coeffs_mut().iter_mut().enumerate() {
            *u = f.linear[slot] * *u
                + f.current[slot] * cube.coeffs()[slot]
                + f.previous[slot] * self.prev_cubic.coeffs()[slot];
        }
        self.step += 1;
        self.prev_cubic = cube;
        if !self.current.is_finite() {
            return Err(Error::BlowUp {
                step: self.step,
                time: self.time(),
            });
        }
        Ok(())
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn step_index(&self) -> usize {
        self.step
    }

    pub fn time(&self) -> f64 {
        self.step as f64 * self.dt
    }

    pub fn field(&self) -> &SpectralField {
        &self.current
    }

    /// Cubic spectrum from the previous step, `Ĉ^{n-1}`.
    pub fn previous_cubic(&self) -> &SpectralField {
        &self.prev_cubic
    }
}

/// Identification of a run, copied into every [`Trajectory`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunMeta {
    pub params: ModelParams,
    pub length: f64,
    pub points: usize,
    pub dt: f64,
    pub scheme: &'static str,
}

/// Snapshots of one run at strictly increasing times on a single grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub snapshots: Vec<SpectralField>,
    pub meta: RunMeta,
}

impl Trajectory {
    pub fn terminal(&self) -> &SpectralField {
        self.snapshots.last().expect("trajectory is never empty")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectory is never empty")
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Runs `steps` steps of `scheme` from `u0`, keeping the snapshots at the
/// step indices listed in `keep` (sorted, each `≤ steps`; index 0 is `u0`).
pub fn evolve(
    scheme: Scheme,
    params: &ModelParams,
    u0: &SpectralField,
    dt: f64,
    steps: usize,
    keep: &[usize],
    dealias: Dealias,
) -> Result<Trajectory> {
    if keep.windows(2).any(|w| w[0] >= w[1]) || keep.last().is_some_and(|&k| k > steps) {
        return Err(Error::invalid("snapshot steps must be increasing and within the run"));
    }
    let meta = RunMeta {
        params: *params,
        length: u0.grid().length(),
        points: u0.grid().points(),
        dt,
        scheme: scheme.name(),
    };
    let mut times = Vec::with_capacity(keep.len());
    let mut snapshots = Vec::with_capacity(keep.len());
    let mut wanted = keep.iter().peekable();
    if wanted.next_if_eq(&&0).is_some() {
        times.push(0.0);
        snapshots.push(u0.clone());
    }
    if steps > 0 {
        let mut state = StepperState::bootstrap(scheme, params, u0, dt, dealias)?;
        loop {
            if wanted.next_if_eq(&&state.step_index()).is_some() {
                times.push(state.time());
                snapshots.push(state.field().clone());
            }
            if state.step_index() == steps {
                break;
            }
            state.step()?;
        }
    }
    Ok(Trajectory {
        times,
        snapshots,
        meta,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PicardOptions {
    /// Length of the interval `[0, T]`.
    pub final_time: f64,
    /// Number of uniform time nodes, endpoints included.
    pub nodes: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub dealias: Dealias,
}

#[derive(Debug, Clone)]
pub struct PicardSolution {
    pub trajectory: Trajectory,
    pub iterations: usize,
    /// `max_i ‖u^{(m+1)}(t_i) - u^{(m)}(t_i)‖_0` of the last iteration.
    pub residual: f64,
}

/// Fixed-point iteration of the mild formulation on uniform nodes, with
/// the Duhamel integral discretized by the composite trapezoid rule. The
/// first iterate is the linear flow `𝒯(t_i) u₀`.
pub fn picard_solve(
    params: &ModelParams,
    u0: &SpectralField,
    opts: &PicardOptions,
) -> Result<PicardSolution> {
    params.validate()?;
    if !(opts.final_time.is_finite() && opts.final_time > 0.0) {
        return Err(Error::invalid("Picard interval must be positive"));
    }
    if opts.nodes < 2 {
        return Err(Error::invalid("Picard iteration needs at least two time nodes"));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::invalid("Picard tolerance must be positive"));
    }
    let grid = u0.grid();
    let n = grid.points();
    let m = opts.nodes;
    let h = opts.final_time / (m - 1) as f64;
    let sym = linear_symbol(params, grid);
    // propagators[l] = e^{σ l h}
    let propagators: Vec<Vec<Complex>> = (0..m).map(|l| sym.multipliers(l as f64 * h)).collect();

    let mut iterate: Vec<SpectralField> = propagators
        .iter()
        .map(|e| {
            let coeffs = e.iter().zip(u0.coeffs()).map(|(a, b)| a * b).collect();
            SpectralField::from_coeffs(grid, coeffs).expect("same grid")
        })
        .collect();
    let free = iterate.clone();

    let mut iterations = 0;
    loop {
        iterations += 1;
        let forcing: Vec<SpectralField> = iterate
            .iter()
            .map(|u| nonlinear_term(params, u, opts.dealias))
            .collect();
        let mut residual: f64 = 0.0;
        let mut next = Vec::with_capacity(m);
        next.push(u0.clone());
        for i in 1..m {
            let mut acc = vec![Complex::new(0.0, 0.0); n];
            for (j, f) in forcing.iter().enumerate().take(i + 1) {
                let weight = if j == 0 || j == i { 0.5 * h } else { h };
                for ((a, e), c) in acc.iter_mut().zip(&propagators[i - j]).zip(f.coeffs()) {
                    *a += e * c * weight;
                }
            }
            for (a, v) in acc.iter_mut().zip(free[i].coeffs()) {
                *a += v;
            }
            let u = SpectralField::from_coeffs(grid, acc)?;
            if !u.is_finite() {
                return Err(Error::NoContraction {
                    iterations,
                    residual: f64::INFINITY,
                });
            }
            residual = residual.max(u.l2_distance(&iterate[i])?);
            next.push(u);
        }
        iterate = next;
        if residual <= opts.tol {
            let times = (0..m).map(|i| i as f64 * h).collect();
            return Ok(PicardSolution {
                trajectory: Trajectory {
                    times,
                    snapshots: iterate,
                    meta: RunMeta {
                        params: *params,
                        length: grid.length(),
                        points: n,
                        dt: h,
                        scheme: "picard",
                    },
                },
                iterations,
                residual,
            });
        }
        if iterations >= opts.max_iter {
            return Err(Error::NoContraction {
                iterations,
                residual,
            });
        }
    }
}
