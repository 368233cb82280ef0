//! Fields stored as Fourier coefficients on a [`PeriodicGrid`].
//!
//! Conventions: `û_k = (1/N) Σ_j u(x_j) e^{-i w_k x_j}` (trapezoid rule for
//! `(1/L)∫ u e^{-i w_k x} dx`) and `u(x_j) = Σ_k û_k e^{i w_k x_j}`.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use crate::grid::PeriodicGrid;
use crate::{Complex, Error, Result};

const ZERO: Complex = Complex::new(0.0, 0.0);

/// Smoothness exponent `s ≥ 0` of the periodic Sobolev space `H^s`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SobolevOrder(f64);

impl SobolevOrder {
    pub const L2: SobolevOrder = SobolevOrder(0.0);

    pub fn new(s: f64) -> Result<Self> {
        if s.is_finite() && s >= 0.0 {
            Ok(SobolevOrder(s))
        } else {
            Err(Error::invalid("Sobolev order must be finite and non-negative"))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// `(1 + k²)^s`
    pub fn weight(self, k: i64) -> f64 {
        let k = k as f64;
        (1.0 + k * k).powf(self.0)
    }
}

/// How products in physical space are protected from aliasing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Dealias {
    /// Zero-pad to `2N` points; exact for cubic products.
    #[default]
    Pad2,
    /// Plain collocation product on the `N`-point grid.
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: PeriodicGrid,
    coeffs: Vec<Complex>,
}

impl SpectralField {
    pub fn zeros(grid: &PeriodicGrid) -> Self {
        SpectralField {
            grid: grid.clone(),
            coeffs: vec![ZERO; grid.points()],
        }
    }

    /// Wraps coefficients given in storage order.
    pub fn from_coeffs(grid: &PeriodicGrid, coeffs: Vec<Complex>) -> Result<Self> {
        if coeffs.len() != grid.points() {
            return Err(Error::invalid("coefficient count does not match the grid"));
        }
        Ok(SpectralField {
            grid: grid.clone(),
            coeffs,
        })
    }

    /// Builds a field from `(k, û_k)` pairs; unresolved modes are an error.
    pub fn from_modes(grid: &PeriodicGrid, modes: &[(i64, Complex)]) -> Result<Self> {
        let mut field = SpectralField::zeros(grid);
        for &(k, c) in modes {
            let slot = grid
                .slot(k)
                .ok_or_else(|| Error::invalid("mode is not resolved by the grid"))?;
            field.coeffs[slot] += c;
        }
        Ok(field)
    }

    /// Forward transform of grid samples.
    pub fn from_samples(grid: &PeriodicGrid, samples: &[Complex]) -> Result<Self> {
        if samples.len() != grid.points() {
            return Err(Error::invalid("sample count does not match the grid"));
        }
        let mut coeffs = samples.to_vec();
        grid.fft().forward(&mut coeffs);
        let scale = 1.0 / grid.points() as f64;
        for c in coeffs.iter_mut() {
            *c *= scale;
        }
        Ok(SpectralField {
            grid: grid.clone(),
            coeffs,
        })
    }

    /// Samples `f` at the collocation points and transforms.
    pub fn from_fn(grid: &PeriodicGrid, f: impl Fn(f64) -> Complex) -> Self {
        let samples: Vec<Complex> = grid.nodes().into_iter().map(f).collect();
        // lengths agree by construction
        SpectralField::from_samples(grid, &samples).expect("sample count")
    }

    /// Values `u(x_j)` at the collocation points.
    pub fn to_samples(&self) -> Vec<Complex> {
        let mut samples = self.coeffs.clone();
        self.grid.fft().inverse(&mut samples);
        samples
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    /// Coefficients in storage order.
    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex> {
        self.coeffs
    }

    /// `û_k`, zero for modes the grid does not resolve.
    pub fn coeff(&self, k: i64) -> Complex {
        self.grid.slot(k).map_or(ZERO, |slot| self.coeffs[slot])
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    fn check_grid(&self, other: &SpectralField) -> Result<()> {
        if self.grid.same_as(&other.grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// `⟨f, g⟩_s = L Σ_k (1 + k²)^s f̂_k conj(ĝ_k)`
    pub fn hs_inner(&self, other: &SpectralField, s: SobolevOrder) -> Result<Complex> {
        self.check_grid(other)?;
        let sum: Complex = self
            .grid
            .modes()
            .zip(self.coeffs.iter().zip(&other.coeffs))
            .map(|(k, (f, g))| *f * g.conj() * s.weight(k))
            .sum();
        Ok(sum * self.grid.length())
    }

    /// `‖f‖_s = (Σ_k (1 + k²)^s |f̂_k|²)^{1/2}`. Note: no factor `L`, unlike
    /// [`SpectralField::hs_inner`].
    pub fn hs_norm(&self, s: SobolevOrder) -> f64 {
        self.hs_norm_sq(s).sqrt()
    }

    pub fn hs_norm_sq(&self, s: SobolevOrder) -> f64 {
        self.grid
            .modes()
            .zip(&self.coeffs)
            .map(|(k, c)| s.weight(k) * c.norm_sqr())
            .sum()
    }

    /// `‖f‖_0`, which equals the root mean square of the grid samples.
    pub fn l2_norm(&self) -> f64 {
        self.hs_norm(SobolevOrder::L2)
    }

    /// `max_j |u(x_j)|`
    pub fn sup_norm(&self) -> f64 {
        self.to_samples().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn sub(&self, other: &SpectralField) -> Result<SpectralField> {
        self.check_grid(other)?;
        Ok(self.zip_map(other, |a, b| a - b))
    }

    pub fn add(&self, other: &SpectralField) -> Result<SpectralField> {
        self.check_grid(other)?;
        Ok(self.zip_map(other, |a, b| a + b))
    }

    pub fn scale(&self, factor: Complex) -> SpectralField {
        SpectralField {
            grid: self.grid.clone(),
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    fn zip_map(&self, other: &SpectralField, f: impl Fn(Complex, Complex) -> Complex) -> Self {
        SpectralField {
            grid: self.grid.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        }
    }

    /// `‖f - g‖_0`
    pub fn l2_distance(&self, other: &SpectralField) -> Result<f64> {
        Ok(self.sub(other)?.l2_norm())
    }

    /// `max_j |f(x_j) - g(x_j)|`
    pub fn sup_distance(&self, other: &SpectralField) -> Result<f64> {
        Ok(self.sub(other)?.sup_norm())
    }

    /// Orthogonal projection onto the modes `|k| < M/2` (plus `-M/2`),
    /// returned on an `M`-point grid of the same length.
    pub fn truncate(&self, points: usize) -> Result<SpectralField> {
        if !points.is_multiple_of(2) || points < 4 || points > self.grid.points() {
            return Err(Error::invalid(
                "truncation size must be even, at least 4 and at most the grid size",
            ));
        }
        let target = self.grid.with_points(points)?;
        let coeffs = target.modes().map(|k| self.coeff(k)).collect();
        Ok(SpectralField {
            grid: target,
            coeffs,
        })
    }

    /// Embeds the field in a finer grid of the same length (zero padding).
    pub fn pad(&self, points: usize) -> Result<SpectralField> {
        if points < self.grid.points() {
            return Err(Error::invalid("padding size must not be smaller than the grid"));
        }
        let target = self.grid.with_points(points)?;
        let mut field = SpectralField::zeros(&target);
        for (k, c) in self.grid.modes().zip(&self.coeffs) {
            let slot = target.slot(k).expect("coarse mode resolved by finer grid");
            field.coeffs[slot] = *c;
        }
        Ok(field)
    }
}

/// Dealiased coefficients of `a · conj(b) · c`.
///
/// Coefficients are zero-padded to `2N`, multiplied in physical space and
/// truncated back to `N` modes, which reproduces the triple convolution
/// `Σ_{p - q + r = k} â_p conj(b̂_q) ĉ_r` over resolved modes exactly.
pub fn dealias_pad_product(
    a: &SpectralField,
    b: &SpectralField,
    c: &SpectralField,
) -> Result<SpectralField> {
    triple_product(a, b, c, Dealias::Pad2)
}

/// Coefficients of `a · conj(b) · c` using the requested dealiasing.
pub fn triple_product(
    a: &SpectralField,
    b: &SpectralField,
    c: &SpectralField,
    dealias: Dealias,
) -> Result<SpectralField> {
    a.check_grid(b)?;
    a.check_grid(c)?;
    let grid = a.grid();
    match dealias {
        Dealias::Pad2 => {
            let n = grid.points();
            let plan = grid.padded_fft();
            let to_padded = |f: &SpectralField| {
                let mut buf = vec![ZERO; 2 * n];
                for (k, v) in grid.modes().zip(&f.coeffs) {
                    let slot = if k >= 0 { k as usize } else { (2 * n as i64 + k) as usize };
                    buf[slot] = *v;
                }
                plan.inverse(&mut buf);
                buf
            };
            let pa = to_padded(a);
            let pb = to_padded(b);
            let mut pc = to_padded(c);
            for ((z, x), y) in pc.iter_mut().zip(&pa).zip(&pb) {
                *z = *x * y.conj() * *z;
            }
            plan.forward(&mut pc);
            let scale = 1.0 / (2 * n) as f64;
            let coeffs = grid
                .modes()
                .map(|k| {
                    let slot = if k >= 0 { k as usize } else { (2 * n as i64 + k) as usize };
                    pc[slot] * scale
                })
                .collect();
            Ok(SpectralField {
                grid: grid.clone(),
                coeffs,
            })
        }
        Dealias::None => {
            let sa = a.to_samples();
            let sb = b.to_samples();
            let mut sc = c.to_samples();
            for ((z, x), y) in sc.iter_mut().zip(&sa).zip(&sb) {
                *z = *x * y.conj() * *z;
            }
            SpectralField::from_samples(grid, &sc)
        }
    }
}

/// Coefficients of `|u|² u`.
pub fn cubic(u: &SpectralField, dealias: Dealias) -> SpectralField {
    triple_product(u, u, u, dealias).expect("single grid")
}
