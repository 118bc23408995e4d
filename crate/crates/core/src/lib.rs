//! Unruh-DeWitt detectors coupled to a massless scalar in a periodic
//! (1+1)-dimensional cavity, with the zero mode kept as a quantum
//! degree of freedom.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`] holds the physical parameters, zero-mode states, worldlines
//!   and switching functions.
//! * [`wightman`] evaluates the oscillator, zero-mode and Minkowski
//!   two-point functions and the renormalised stress-energy.
//! * [`numerics`] provides windowed quadrature, ordered double integrals,
//!   mode sums with tail control and the special functions.
//! * [`evolution`] builds the perturbative detector density matrix and the
//!   zero-mode/oscillator strength estimators.
//! * [`response`] computes the derivative-coupling response for inertial and
//!   uniformly accelerated detectors.
//! * [`registry`] lets alternative numerical strategies be selected by name.

pub mod error;
pub mod evolution;
pub mod matrix;
pub mod model;
pub mod numerics;
pub mod registry;
pub mod response;
pub mod wightman;

pub use error::{Error, Result};
pub use matrix::Mat2;
pub use num_complex::Complex64;
