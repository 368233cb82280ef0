//! Periodic Fourier pseudospectral solver for the derivative nonlinear
//! Schrödinger equation with diffusion,
//!
//! ```text
//! i u_t + u_xx + i α (|u|² u)_x = i (η u_xx + β u_xxx + γ u_x),   u(x + L, t) = u(x, t).
//! ```
//!
//! The crate is `no_std` and only needs `alloc`. It contains:
//!
//! * [`grid`] and [`field`]: the periodic grid, transform conventions,
//!   Sobolev norms, truncation and exact (2N zero-padded) dealiasing.
//! * [`model`]: parameters, the linear symbol, the exact semigroup and the
//!   nonlinear term `F(u) = -α ∂x(|u|² u)`.
//! * [`stepper`]: the Crank–Nicolson / Adams–Bashforth-2 scheme, an ETD2
//!   exponential integrator and a Picard iteration on the mild formulation.
//! * [`experiments`]: convergence ladders, linear validation and
//!   vanishing-parameter sweeps.
//!
//! File formats and the command line live in the `dnls-cli` crate.
#![no_std]
// `!(x > 0.0)` is used on purpose so NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod experiments;
pub mod fft;
pub mod field;
pub mod grid;
pub mod model;
pub mod stepper;

pub use error::{Error, Result};
pub use field::{Dealias, SobolevOrder, SpectralField};
pub use grid::PeriodicGrid;
pub use model::{LinearSymbol, ModelParams};
pub use stepper::{Scheme, StepperState, Trajectory};

/// Complex scalar used throughout.
pub type Complex = num_complex::Complex64;
