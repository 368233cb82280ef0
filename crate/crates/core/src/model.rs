//! Equation parameters, the linear symbol and its semigroup, and the
//! derivative-cubic nonlinearity.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use crate::field::{cubic, Dealias, SpectralField};
use crate::grid::PeriodicGrid;
use crate::{Complex, Error, Result};

/// Coefficients of `i u_t + u_xx + i α (|u|²u)_x = i (η u_xx + β u_xxx + γ u_x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub eta: f64,
}

impl ModelParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64, eta: f64) -> Result<Self> {
        let p = ModelParams {
            alpha,
            beta,
            gamma,
            eta,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if ![self.alpha, self.beta, self.gamma, self.eta]
            .iter()
            .all(|v| v.is_finite())
        {
            return Err(Error::invalid("model parameters must be finite"));
        }
        if self.eta < 0.0 {
            return Err(Error::invalid("eta must be non-negative"));
        }
        Ok(())
    }

    /// `m(w) = -w² + iηw² - βw³ + γw`, the factor multiplying `û_k` in the
    /// semidiscrete system `i û_k' + m_k û_k = α w_k Ĉ_k`.
    pub fn dispersion(&self, w: f64) -> Complex {
        let w2 = w * w;
        Complex::new(-w2 - self.beta * w2 * w + self.gamma * w, self.eta * w2)
    }

    /// `σ(w) = -i w² - η w² - iβ w³ + iγ w = i m(w)`.
    pub fn growth_rate(&self, w: f64) -> Complex {
        let w2 = w * w;
        Complex::new(-self.eta * w2, -w2 - self.beta * w2 * w + self.gamma * w)
    }
}

/// Per-mode growth rates `σ_k` of the linear part; `û_k(t) = e^{σ_k t} û_k(0)`.
#[derive(Debug, Clone)]
pub struct LinearSymbol {
    grid: PeriodicGrid,
    eta: f64,
    sigma: Vec<Complex>,
}

pub fn linear_symbol(params: &ModelParams, grid: &PeriodicGrid) -> LinearSymbol {
    LinearSymbol {
        grid: grid.clone(),
        eta: params.eta,
        sigma: grid
            .wavenumbers()
            .into_iter()
            .map(|w| params.growth_rate(w))
            .collect(),
    }
}

impl LinearSymbol {
    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    /// Growth rates in storage order.
    pub fn rates(&self) -> &[Complex] {
        &self.sigma
    }

    pub fn rate(&self, k: i64) -> Option<Complex> {
        self.grid.slot(k).map(|s| self.sigma[s])
    }

    /// Smoothing rate `θ = 8ηπ²/L²`: `|e^{σ_k t}|² = e^{-θ k² t}`.
    pub fn theta(&self) -> f64 {
        let l = self.grid.length();
        8.0 * self.eta * PI * PI / (l * l)
    }

    /// Multipliers `e^{σ_k t}` in storage order.
    pub fn multipliers(&self, t: f64) -> Vec<Complex> {
        self.sigma.iter().map(|s| (s * t).exp()).collect()
    }

    /// `𝒯(t) u`. Negative times are rejected: backward diffusion is ill-posed.
    pub fn apply_semigroup(&self, t: f64, field: &SpectralField) -> Result<SpectralField> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::invalid("semigroup time must be finite and non-negative"));
        }
        if !self.grid.same_as(field.grid()) {
            return Err(Error::GridMismatch);
        }
        let coeffs = field
            .coeffs()
            .iter()
            .zip(&self.sigma)
            .map(|(c, s)| c * (s * t).exp())
            .collect();
        SpectralField::from_coeffs(&self.grid, coeffs)
    }

    /// `max_k (1 + k²)^λ e^{-θ k² t}` over resolved modes: the factor in
    /// `‖𝒯(t)u‖²_{s+λ} ≤ factor · ‖u‖²_s`.
    pub fn smoothing_factor(&self, lambda: f64, t: f64) -> f64 {
        let theta = self.theta();
        self.grid
            .modes()
            .map(|k| {
                let k2 = (k * k) as f64;
                (1.0 + k2).powf(lambda) * (-theta * k2 * t).exp()
            })
            .fold(0.0, f64::max)
    }
}

/// Exact solution of the linear problem (`α = 0`) at time `t`.
pub fn exact_linear_solution(
    params: &ModelParams,
    u0: &SpectralField,
    t: f64,
) -> Result<SpectralField> {
    if params.alpha != 0.0 {
        return Err(Error::invalid("exact solution requires alpha = 0"));
    }
    linear_symbol(params, u0.grid()).apply_semigroup(t, u0)
}

/// `F(u) = -α ∂x(|u|² u)`, with the cubic computed by [`cubic`].
pub fn nonlinear_term(params: &ModelParams, field: &SpectralField, dealias: Dealias) -> SpectralField {
    let cube = cubic(field, dealias);
    derivative_forcing(params, &cube)
}

/// `-α i w_k Ĉ_k` from the coefficients `Ĉ` of `|u|²u`.
pub fn derivative_forcing(params: &ModelParams, cube: &SpectralField) -> SpectralField {
    let grid = cube.grid();
    let coeffs = grid
        .wavenumbers()
        .into_iter()
        .zip(cube.coeffs())
        .map(|(w, c)| Complex::new(0.0, -params.alpha * w) * c)
        .collect();
    SpectralField::from_coeffs(grid, coeffs).expect("same grid")
}

/// Right side `α w_k Ĉ_k` of the semidiscrete system `i û_k' + m_k û_k = α w_k Ĉ_k`.
pub fn semidiscrete_forcing(params: &ModelParams, cube: &SpectralField) -> Vec<Complex> {
    cube.grid()
        .wavenumbers()
        .into_iter()
        .zip(cube.coeffs())
        .map(|(w, c)| c * (params.alpha * w))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::SobolevOrder;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn params(alpha: f64, beta: f64, gamma: f64, eta: f64) -> ModelParams {
        ModelParams::new(alpha, beta, gamma, eta).unwrap()
    }

    #[test]
    fn rejects_negative_eta_and_nan() {
        assert!(ModelParams::new(0.0, 0.0, 0.0, -1e-3).is_err());
        assert!(ModelParams::new(f64::NAN, 0.0, 0.0, 0.0).is_err());
        assert!(ModelParams::new(0.0, 0.0, 0.0, 0.0).is_ok());
    }

    #[test]
    fn symbol_values() {
        let g = PeriodicGrid::new(2.0 * PI, 16).unwrap();
        let schr = linear_symbol(&params(0.0, 0.0, 0.0, 0.0), &g);
        for (w, s) in g.wavenumbers().iter().zip(schr.rates()) {
            assert_eq!(*s, c(0.0, -w * w));
        }
        let full = linear_symbol(&params(0.3, 1.0, -1.0, 1.0), &g);
        assert_eq!(full.rate(0), Some(c(0.0, 0.0)));
        // w_1 = 1 on L = 2π
        assert!((full.rate(1).unwrap() - c(-1.0, -3.0)).norm() < 1e-15);
        for s in full.rates() {
            assert!(s.re <= 0.0);
        }
    }

    #[test]
    fn dispersion_and_rate_agree() {
        let p = params(-1.0, 0.5, 0.5, 0.5);
        for w in [-3.0, -0.2, 0.0, 0.7, 12.5] {
            assert_eq!(c(0.0, 1.0) * p.dispersion(w), p.growth_rate(w));
        }
    }

    #[test]
    fn theta_matches_decay_of_modulus() {
        let p = params(0.0, 0.2, 0.1, 0.7);
        let g = PeriodicGrid::new(13.0, 32).unwrap();
        let sym = linear_symbol(&p, &g);
        let t = 0.37;
        for (k, m) in g.modes().zip(sym.multipliers(t)) {
            let expect = (-sym.theta() * (k * k) as f64 * t).exp();
            assert!((m.norm_sqr() - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn semigroup_identity_and_errors() {
        let g = PeriodicGrid::new(10.0, 32).unwrap();
        let sym = linear_symbol(&params(0.0, 1.0, 1.0, 1.0), &g);
        let u = SpectralField::from_fn(&g, |x| c((-(x - 5.0) * (x - 5.0)).exp(), 0.0));
        assert_eq!(sym.apply_semigroup(0.0, &u).unwrap(), u);
        assert!(matches!(sym.apply_semigroup(-0.1, &u), Err(Error::InvalidInput(_))));
        let other = SpectralField::zeros(&PeriodicGrid::new(10.0, 16).unwrap());
        assert_eq!(sym.apply_semigroup(1.0, &other), Err(Error::GridMismatch));
    }

    #[test]
    fn single_mode_decay() {
        let g = PeriodicGrid::new(10.0, 32).unwrap();
        let p = params(0.0, 0.4, -0.3, 0.8);
        let sym = linear_symbol(&p, &g);
        let u = SpectralField::from_modes(&g, &[(3, c(0.6, 0.8))]).unwrap();
        let t = 0.25;
        let got = sym.apply_semigroup(t, &u).unwrap();
        let w = g.wavenumber(3);
        assert!((got.coeff(3).norm() - (-p.eta * w * w * t).exp()).abs() < 1e-15);
    }

    #[test]
    fn semigroup_law() {
        let g = PeriodicGrid::new(7.0, 64).unwrap();
        let sym = linear_symbol(&params(0.0, 0.3, -0.6, 0.2), &g);
        let u = SpectralField::from_fn(&g, |x| c((x * 0.9).sin(), (-(x - 3.0) * (x - 3.0)).exp()));
        let direct = sym.apply_semigroup(0.7, &u).unwrap();
        let composed = sym
            .apply_semigroup(0.3, &sym.apply_semigroup(0.4, &u).unwrap())
            .unwrap();
        assert!(direct.sub(&composed).unwrap().l2_norm() <= 1e-12 * u.l2_norm());
    }

    #[test]
    fn exact_solution_requires_linear_model() {
        let g = PeriodicGrid::new(7.0, 16).unwrap();
        let u = SpectralField::zeros(&g);
        assert!(exact_linear_solution(&params(1.0, 0.0, 0.0, 0.0), &u, 1.0).is_err());
        assert_eq!(exact_linear_solution(&params(0.0, 1.0, 0.0, 0.0), &u, 0.0).unwrap(), u);
    }

    #[test]
    fn transport_shifts_by_whole_cells() {
        // u_xx is always present, so the γ flow is the γ = 0 flow shifted by γt
        let g = PeriodicGrid::new(20.0, 128).unwrap();
        let gamma = 0.75;
        let shift_cells = 6;
        let t = shift_cells as f64 * g.dx() / gamma;
        let u0 = SpectralField::from_fn(&g, |x| c((-(x - 10.0) * (x - 10.0)).exp(), 0.0));
        let schr = exact_linear_solution(&params(0.0, 0.0, 0.0, 0.0), &u0, t).unwrap();
        let moved = exact_linear_solution(&params(0.0, 0.0, gamma, 0.0), &u0, t).unwrap();
        let a = schr.to_samples();
        let b = moved.to_samples();
        let n = g.points();
        for j in 0..n {
            assert!((b[j] - a[(j + shift_cells) % n]).norm() < 1e-12);
        }
    }

    #[test]
    fn nonlinear_term_simple_cases() {
        let g = PeriodicGrid::new(2.0 * PI, 16).unwrap();
        let p = params(-1.0, 0.0, 0.0, 0.0);
        let constant = SpectralField::from_modes(&g, &[(0, c(0.7, 0.1))]).unwrap();
        assert!(nonlinear_term(&p, &constant, Dealias::Pad2).l2_norm() < 1e-15);

        let p2 = params(0.8, 0.0, 0.0, 0.0);
        let wave = SpectralField::from_modes(&g, &[(1, c(1.0, 0.0))]).unwrap();
        let f = nonlinear_term(&p2, &wave, Dealias::Pad2);
        assert!((f.coeff(1) - c(0.0, -0.8)).norm() < 1e-14);

        let two = SpectralField::from_modes(&g, &[(0, c(1.0, 0.0)), (1, c(1.0, 0.0))]).unwrap();
        let f = nonlinear_term(&p, &two, Dealias::Pad2);
        for (k, expect) in [(-1, c(0.0, -1.0)), (0, c(0.0, 0.0)), (1, c(0.0, 3.0)), (2, c(0.0, 2.0))] {
            assert!((f.coeff(k) - expect).norm() < 1e-14, "k = {k}");
        }
    }

    #[test]
    fn semidiscrete_forcing_relates_to_f() {
        // i û' = -m û + α w Ĉ, so the forcing is i F̂
        let g = PeriodicGrid::new(9.0, 32).unwrap();
        let p = params(-0.6, 0.0, 0.0, 0.0);
        let u = SpectralField::from_fn(&g, |x| c((x * 0.7).cos(), (x * 1.4).sin()));
        let cube = cubic(&u, Dealias::Pad2);
        let f = derivative_forcing(&p, &cube);
        for (a, b) in semidiscrete_forcing(&p, &cube).iter().zip(f.coeffs()) {
            assert!((a - c(0.0, 1.0) * b).norm() < 1e-14);
        }
    }

    #[test]
    fn l2_contraction() {
        let g = PeriodicGrid::new(9.0, 32).unwrap();
        let u = SpectralField::from_fn(&g, |x| c((x * 0.7).cos(), (-(x - 4.0) * (x - 4.0)).exp()));
        let diffusive = linear_symbol(&params(0.0, 1.0, 1.0, 0.3), &g);
        let conservative = linear_symbol(&params(0.0, 1.0, 1.0, 0.0), &g);
        let n0 = u.hs_norm(SobolevOrder::L2);
        assert!(diffusive.apply_semigroup(0.5, &u).unwrap().l2_norm() < n0);
        let kept = conservative.apply_semigroup(0.5, &u).unwrap().l2_norm();
        assert!((kept - n0).abs() < 1e-14);
        let constant = SpectralField::from_modes(&g, &[(0, c(2.0, 0.0))]).unwrap();
        assert_eq!(diffusive.apply_semigroup(3.0, &constant).unwrap().l2_norm(), 2.0);
    }
}
