//! Two bilinearly coupled harmonic oscillators, solved exactly and within the
//! Born-Oppenheimer (BO) product ansatz.
//!
//! The crate is organised bottom-up:
//!
//! * [`params`]: validated physical parameters (ħ = 1 throughout).
//! * [`pcf`]: integer-order parabolic cylinder functions `D_n`, their matrix
//!   elements and Gauss–Hermite quadrature.
//! * [`exact`]: normal-mode diagonalisation, exact energies and wavefunctions.
//! * [`bo`]: fast-coordinate channel functions `χ_n`, potential curves,
//!   non-adiabatic couplings, BO energies and wavefunctions.
//! * [`phasespace`]: the `(φ_n, ϑ_n)` tangent field, its stability, and a
//!   two-sided shooting eigensolver.
//! * [`analysis`]: BO error analysis, wavefunction overlaps, the QU bridge
//!   between `G` and `G̃`, and figure datasets.
//!
//! Sweeps run on rayon when the `parallel` feature is enabled (the default);
//! see [`par`].

#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod analysis;
pub mod bo;
pub mod error;
pub mod exact;
pub mod linalg;
pub mod par;
pub mod params;
pub mod pcf;
pub mod phasespace;

pub use error::{Error, Result};
pub use params::{RawParams, StateIndex, SystemParams};
