use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::fft::Fft;
use crate::{Error, Result};

/// Uniform grid on the periodic interval `[0, L)` with `N` collocation points.
///
/// Modes are `k ∈ {-N/2, …, N/2 - 1}` with wavenumbers `w_k = 2πk/L`. The
/// Nyquist slot holds mode `-N/2`. Coefficient vectors use transform order:
/// slot `j < N/2` is mode `j`, slot `j ≥ N/2` is mode `j - N`.
///
/// Cloning is cheap; transform plans are shared.
#[derive(Clone)]
pub struct PeriodicGrid {
    length: f64,
    points: usize,
    plan: Arc<Fft>,
    padded: Arc<Fft>,
}

impl PeriodicGrid {
    pub fn new(length: f64, points: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::invalid("domain length must be finite and positive"));
        }
        if points < 4 || !points.is_multiple_of(2) {
            return Err(Error::invalid("point count must be even and at least 4"));
        }
        Ok(PeriodicGrid {
            length,
            points,
            plan: Arc::new(Fft::new(points)),
            padded: Arc::new(Fft::new(2 * points)),
        })
    }

    /// Same domain length with a different point count.
    pub fn with_points(&self, points: usize) -> Result<Self> {
        if points == self.points {
            return Ok(self.clone());
        }
        PeriodicGrid::new(self.length, points)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn dx(&self) -> f64 {
        self.length / self.points as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        j as f64 * self.dx()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.points).map(|j| self.node(j)).collect()
    }

    /// Mode index stored in `slot`.
    pub fn mode(&self, slot: usize) -> i64 {
        let n = self.points;
        if slot < n / 2 {
            slot as i64
        } else {
            slot as i64 - n as i64
        }
    }

    /// Storage slot of mode `k`, if `k` is resolved by this grid.
    pub fn slot(&self, k: i64) -> Option<usize> {
        let half = (self.points / 2) as i64;
        if k >= 0 && k < half {
            Some(k as usize)
        } else if k < 0 && k >= -half {
            Some((k + self.points as i64) as usize)
        } else {
            None
        }
    }

    /// Mode indices in storage order.
    pub fn modes(&self) -> impl ExactSizeIterator<Item = i64> + '_ {
        (0..self.points).map(|slot| self.mode(slot))
    }

    pub fn wavenumber(&self, k: i64) -> f64 {
        2.0 * PI * k as f64 / self.length
    }

    /// `w_k` in storage order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        self.modes().map(|k| self.wavenumber(k)).collect()
    }

    /// Grids are compatible when they have the same point count and length.
    pub fn same_as(&self, other: &PeriodicGrid) -> bool {
        self.points == other.points && self.length == other.length
    }

    pub(crate) fn fft(&self) -> &Fft {
        &self.plan
    }

    pub(crate) fn padded_fft(&self) -> &Fft {
        &self.padded
    }
}

impl PartialEq for PeriodicGrid {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl fmt::Debug for PeriodicGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PeriodicGrid")
            .field("length", &self.length)
            .field("points", &self.points)
            .finish()
    }
}
