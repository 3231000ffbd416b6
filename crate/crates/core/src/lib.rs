//! Spectral toolkit for the two-phase Stokes free-boundary problem with
//! surface tension near a flat interface.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its inputs; file formats, the command line and worker
//! threads live in the `capillary-stokes` companion crate.
//!
//! Layout:
//! * [`params`], [`grid`], [`spectral`], [`fields`]: physical constants,
//!   tangential/vertical grids and the periodic transform contract.
//! * [`symbols`]: closed-form Fourier-Laplace symbols (DN matrix, boundary
//!   symbol, `k(z)`) and the sampled sector certificate.
//! * [`resolvent`]: analytic per-mode profiles and the finite-difference
//!   boundary-value oracle.
//! * [`laplace`]: contour inversion and exact linear interface evolution.
//! * [`nonlinear`]: the flattened-interface nonlinearities.
//! * [`stepper`]: IMEX time stepping of the full transformed system.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
mod fft;
pub mod fields;
pub mod grid;
pub mod laplace;
pub mod nonlinear;
pub mod params;
pub mod resolvent;
pub mod spectral;
pub mod stepper;
pub mod symbols;

pub use error::{Error, Result};
pub use fields::{BulkFields, InterfaceState, LayeredField};
pub use grid::{TangentialGrid, VerticalGrid};
pub use params::{FluidParams, Phase};

/// Double-precision complex number used throughout.
pub type C64 = num_complex::Complex64;

/// Tangential vector in `C^n`, `n <= 2`; unused trailing slots are zero.
pub type TanVec = [C64; 2];

/// Tangential wavevector; unused trailing slots are zero.
pub type Wavevector = [f64; 2];

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Euclidean norm of a wavevector.
pub fn wavevector_norm(xi: &Wavevector) -> f64 {
    num_traits::Float::hypot(xi[0], xi[1])
}
