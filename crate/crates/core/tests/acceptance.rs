//! Acceptance suite. Runs every criterion at its pinned tolerance, prints one
//! PASS/FAIL line per criterion and exits non-zero if any criterion fails.
//!
//! `cargo test -p dnls-core --test acceptance`

use std::process::ExitCode;
use std::time::{Duration, Instant};

use dnls_core::experiments::{
    converge_space, converge_time, limit_sweep, run_simulation, validate_linear,
    ExperimentConfig, LimitReport, SweepParam,
};
use dnls_core::field::{cubic, Dealias, SobolevOrder, SpectralField};
use dnls_core::model::{linear_symbol, nonlinear_term, ModelParams};
use dnls_core::stepper::{evolve, picard_solve, PicardOptions, Scheme};
use dnls_core::{Complex, PeriodicGrid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Pinned thresholds.
const ORDER_BAND: (f64, f64) = (1.9, 2.1);
const RATIO_BAND: (f64, f64) = (3.6, 4.4);
const TIME_BUDGET_1: Duration = Duration::from_secs(60);
const SPACE_RATIO_MIN: f64 = 8.0;
const SPACE_FLOOR: f64 = 1e-11;
const TIME_BUDGET_2: Duration = Duration::from_secs(300);
const MASS_DRIFT_MAX: f64 = 1e-4;
const MASS_STEP_SLACK: f64 = 1e-10;
const SMOOTHING_REL_TOL: f64 = 1e-12;
const PICARD_AGREEMENT: f64 = 1e-5;
const CONVOLUTION_TOL: f64 = 1e-12;
const SWEEP_EXPONENT_MIN: f64 = 0.4;
const TIME_BUDGET_7: Duration = Duration::from_secs(180);
const BANACH_C: f64 = 4.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn in_band(x: f64, band: (f64, f64)) -> bool {
    x >= band.0 && x <= band.1
}

fn fmt_list(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format!("{x:.4}")).collect();
    format!("[{}]", parts.join(", "))
}

fn fmt_sci(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn ratios(xs: &[f64]) -> Vec<f64> {
    xs.windows(2).map(|w| w[0] / w[1]).collect()
}

fn random_field(rng: &mut ChaCha8Rng, grid: &PeriodicGrid, modes: usize) -> SpectralField {
    let half = (modes / 2) as i64;
    let pairs: Vec<(i64, Complex)> = (-half..half)
        .map(|k| (k, Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
        .collect();
    SpectralField::from_modes(grid, &pairs).expect("modes resolved")
}

fn temporal_order() -> Outcome {
    let start = Instant::now();
    let cfg = ExperimentConfig::temporal_convergence();
    let report = converge_time(&cfg, 5).expect("temporal ladder");
    let elapsed = start.elapsed();
    let orders = report.orders();
    let pass = orders.iter().all(|&o| in_band(o, ORDER_BAND)) && elapsed <= TIME_BUDGET_1;
    Outcome {
        pass,
        detail: format!(
            "errors {} orders {} (need all in [{}, {}]) in {:.2?}",
            fmt_sci(&report.errors()),
            fmt_list(&orders),
            ORDER_BAND.0,
            ORDER_BAND.1,
            elapsed
        ),
    }
}

fn spatial_protocol() -> Outcome {
    let start = Instant::now();
    let cfg = ExperimentConfig::spatial_convergence();
    let report = converge_space(&cfg, cfg.levels.unwrap()).expect("spatial ladder");
    let elapsed = start.elapsed();
    let errors = report.errors();
    let floor_at = errors.iter().position(|&e| e <= SPACE_FLOOR);
    let pass = match floor_at {
        Some(f) => {
            f > 0
                && errors[..=f]
                    .windows(2)
                    .all(|w| w[1] < w[0] && w[0] / w[1] >= SPACE_RATIO_MIN)
        }
        None => false,
    } && elapsed <= TIME_BUDGET_2;
    Outcome {
        pass,
        detail: format!(
            "errors {} ratios {} floor reached at row {:?} in {:.2?}",
            fmt_sci(&errors),
            fmt_sci(&ratios(&errors)),
            floor_at,
            elapsed
        ),
    }
}

fn linear_validation() -> Outcome {
    let cfg = ExperimentConfig::linear_validation();
    let v = validate_linear(&cfg, 4).expect("linear validation");
    let r = ratios(&v.report.errors());
    let pass = r.len() == 3 && r.iter().all(|&x| in_band(x, RATIO_BAND));
    Outcome {
        pass,
        detail: format!(
            "sup errors {} ratios {} (need {:?})",
            fmt_sci(&v.report.errors()),
            fmt_list(&r),
            RATIO_BAND
        ),
    }
}

fn mass_drift(cfg: &ExperimentConfig) -> f64 {
    let tr = run_simulation(cfg).expect("mass run");
    let m0 = tr.snapshots[0].l2_norm();
    tr.snapshots
        .iter()
        .map(|u| (u.l2_norm() - m0).abs() / m0)
        .fold(0.0, f64::max)
}

fn mass_law() -> Outcome {
    let mut cfg = ExperimentConfig::eta_limit();
    cfg.params.eta = 0.0;
    cfg.snapshots = cfg.steps().unwrap();
    let coarse = mass_drift(&cfg);
    let mut half = cfg.clone();
    half.dt /= 2.0;
    half.snapshots = half.steps().unwrap();
    let fine = mass_drift(&half);
    let shrink = coarse / fine;

    let mut diffusive = cfg.clone();
    diffusive.params.eta = 0.5;
    let tr = run_simulation(&diffusive).expect("diffusive run");
    let m0 = tr.snapshots[0].l2_norm();
    let worst_increase = tr
        .snapshots
        .windows(2)
        .map(|w| w[1].l2_norm() - w[0].l2_norm())
        .fold(f64::NEG_INFINITY, f64::max);

    let pass = coarse <= MASS_DRIFT_MAX
        && in_band(shrink, RATIO_BAND)
        && worst_increase <= MASS_STEP_SLACK * m0;
    Outcome {
        pass,
        detail: format!(
            "eta=0 drift {coarse:.3e} at dt={} (need <= {MASS_DRIFT_MAX:e}), {fine:.3e} at dt/2, shrink {shrink:.3} (need {RATIO_BAND:?}); eta=0.5 max per-step growth {worst_increase:.3e}",
            cfg.dt
        ),
    }
}

fn semigroup_smoothing() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let params = ModelParams::new(-1.0, 0.5, 0.5, 0.5).unwrap();
    let grid = PeriodicGrid::new(50.0, 64).unwrap();
    let symbol = linear_symbol(&params, &grid);
    let mut checks = 0;
    let mut violations = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let modes = 2 * rng.gen_range(2..=32);
        let u = random_field(&mut rng, &grid, modes);
        for s in [0.0, 1.0] {
            for lambda in [0.5, 1.0, 2.0] {
                for t in [0.01, 0.1, 1.0] {
                    let lhs = symbol
                        .apply_semigroup(t, &u)
                        .unwrap()
                        .hs_norm_sq(SobolevOrder::new(s + lambda).unwrap());
                    let rhs = symbol.smoothing_factor(lambda, t)
                        * u.hs_norm_sq(SobolevOrder::new(s).unwrap());
                    checks += 1;
                    worst = worst.max(lhs / rhs);
                    if lhs > rhs * (1.0 + SMOOTHING_REL_TOL) {
                        violations += 1;
                    }
                }
            }
        }
    }
    Outcome {
        pass: violations == 0,
        detail: format!("{checks} checks, {violations} violations, max lhs/rhs {worst:.6}"),
    }
}

/// O(N³) reference for `-α i w_k Σ_{p-q+r=k} û_p conj(û_q) û_r`.
fn nonlinear_oracle(params: &ModelParams, u: &SpectralField) -> Vec<Complex> {
    let g = u.grid();
    g.modes()
        .map(|k| {
            let mut sum = Complex::new(0.0, 0.0);
            for p in g.modes() {
                for q in g.modes() {
                    let r = k - p + q;
                    if g.slot(r).is_some() {
                        sum += u.coeff(p) * u.coeff(q).conj() * u.coeff(r);
                    }
                }
            }
            Complex::new(0.0, -params.alpha * g.wavenumber(k)) * sum
        })
        .collect()
}

fn oracle_triangle() -> Outcome {
    let cfg = ExperimentConfig::temporal_convergence();
    let u0 = cfg.initial_field().unwrap();
    let terminal = |scheme: Scheme, dt: f64, t: f64| {
        let steps = (t / dt).round() as usize;
        evolve(scheme, &cfg.params, &u0, dt, steps, &[steps], Dealias::Pad2)
            .unwrap()
            .terminal()
            .clone()
    };
    let gaps: Vec<f64> = [1e-2, 5e-3, 2.5e-3]
        .iter()
        .map(|&dt| {
            terminal(Scheme::Cnab2, dt, cfg.final_time)
                .l2_distance(&terminal(Scheme::Etd2, dt, cfg.final_time))
                .unwrap()
        })
        .collect();
    let gap_ratios = ratios(&gaps);
    let schemes_ok = gap_ratios.iter().all(|&r| in_band(r, RATIO_BAND));

    let opts = PicardOptions {
        final_time: 0.05,
        nodes: 64,
        tol: 1e-12,
        max_iter: 100,
        dealias: Dealias::Pad2,
    };
    let picard = picard_solve(&cfg.params, &u0, &opts).expect("picard");
    let picard_gap = picard
        .trajectory
        .terminal()
        .l2_distance(&terminal(Scheme::Cnab2, 1e-4, 0.05))
        .unwrap();
    let picard_ok = picard_gap <= PICARD_AGREEMENT;

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for n in [4usize, 8, 16, 32, 64] {
        let grid = PeriodicGrid::new(2.0 + n as f64, n).unwrap();
        for _ in 0..3 {
            let u = random_field(&mut rng, &grid, n);
            let fast = nonlinear_term(&cfg.params, &u, Dealias::Pad2);
            for (a, b) in fast.coeffs().iter().zip(nonlinear_oracle(&cfg.params, &u)) {
                worst = worst.max((a - b).norm());
            }
        }
    }
    let conv_ok = worst <= CONVOLUTION_TOL;

    Outcome {
        pass: schemes_ok && picard_ok && conv_ok,
        detail: format!(
            "cnab2-etd2 gaps {} ratios {}; picard iters {} gap {picard_gap:.3e} (need <= {PICARD_AGREEMENT:e}); FFT vs convolution max {worst:.2e}",
            fmt_sci(&gaps),
            fmt_list(&gap_ratios),
            picard.iterations
        ),
    }
}

fn sweep_ok(report: &LimitReport) -> (bool, f64) {
    let d = &report.distances;
    let decreasing = d.windows(2).all(|w| w[1] < w[0]);
    let p = report.fitted_exponent().unwrap_or(f64::NAN);
    (decreasing && p >= SWEEP_EXPONENT_MIN, p)
}

fn limit_sweeps() -> Outcome {
    let values = [0.5, 0.25, 0.125, 0.0625, 0.0];
    let mut details = Vec::new();
    let mut pass = true;
    for (cfg, param) in [
        (ExperimentConfig::eta_limit(), SweepParam::Eta),
        (ExperimentConfig::beta_limit(), SweepParam::Beta),
    ] {
        let start = Instant::now();
        let report = limit_sweep(&cfg, param, &values).expect("sweep");
        let elapsed = start.elapsed();
        let (ok, p) = sweep_ok(&report);
        pass &= ok && elapsed <= TIME_BUDGET_7;
        details.push(format!(
            "{}: d {} p {p:.3} in {elapsed:.2?}",
            param.name(),
            fmt_sci(&report.distances)
        ));
    }
    Outcome {
        pass,
        detail: format!("{} (need strictly decreasing, p >= {SWEEP_EXPONENT_MIN})", details.join("; ")),
    }
}

fn banach_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let s = SobolevOrder::new(1.0).unwrap();
    let mut violations = 0;
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let n = [4usize, 8, 16, 32, 64][rng.gen_range(0..5)];
        let grid = PeriodicGrid::new(10.0, n).unwrap();
        let u = random_field(&mut rng, &grid, n);
        let v = if i % 2 == 0 {
            random_field(&mut rng, &grid, n)
        } else {
            let eps: f64 = rng.gen_range(1e-6..1e-1);
            u.add(&random_field(&mut rng, &grid, n).scale(Complex::new(eps, 0.0)))
                .unwrap()
        };
        // on 4N points the cubic of an N-mode field is represented exactly
        let (up, vp) = (u.pad(4 * n).unwrap(), v.pad(4 * n).unwrap());
        let lhs = cubic(&up, Dealias::Pad2)
            .sub(&cubic(&vp, Dealias::Pad2))
            .unwrap()
            .hs_norm(s);
        let rhs = BANACH_C
            * (u.hs_norm_sq(s) + v.hs_norm(s) * u.add(&v).unwrap().hs_norm(s))
            * u.sub(&v).unwrap().hs_norm(s);
        worst = worst.max(lhs / rhs);
        if lhs > rhs {
            violations += 1;
        }
    }
    Outcome {
        pass: violations == 0,
        detail: format!("1000 pairs, C = {BANACH_C}, {violations} violations, max lhs/rhs {worst:.4}"),
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("temporal order", temporal_order),
        ("spatial protocol", spatial_protocol),
        ("linear validation", linear_validation),
        ("mass law", mass_law),
        ("semigroup smoothing", semigroup_smoothing),
        ("oracle triangle", oracle_triangle),
        ("limit sweeps", limit_sweeps),
        ("Banach-algebra cubic bound", banach_algebra),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = run();
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!("criterion {} [{tag}] {name}: {}", i + 1, outcome.detail);
        if !outcome.pass {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
