//! Harmonic Gaussian time-frequency analysis.
//!
//! A family of orthonormal Hermite-Gaussian atoms `phi_n(t, T, Omega, delta_t)`
//! defines, for each order `n`, a linear map from a signal to a function
//! `Psi_n(T, Omega)` on the time-frequency plane. `|Psi_n|^2` is a
//! non-negative energy density whose plane integral equals the signal energy,
//! and the signal can be recovered from the coefficients either by summing
//! over orders at one point or by integrating one order over the plane.
//!
//! Modules:
//!
//! * [`hermite`]: Hermite polynomials and normalized Hermite functions
//! * [`hgf`]: harmonic Gaussian functions, their Fourier pairs and moments
//! * [`signal`]: sampled signals, continuous Fourier transform, moments, generators
//! * [`transform`]: `Psi_n` grids, energy densities, marginals
//! * [`reconstruct`]: series and plane-integral recovery
//! * [`baselines`]: Wigner-Ville distribution and Gabor / short-time Fourier transform
//! * [`cli`]: file formats and the command-line front end

// `!(x > 0.0)` style checks also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod axis;
pub mod baselines;
pub mod cli;
pub mod error;
mod fourier;
pub mod hermite;
pub mod hgf;
pub mod reconstruct;
pub mod signal;
pub mod transform;

pub use axis::Axis;
pub use error::{Diagnostic, Error, Result};
pub use hgf::{TfPoint, WindowSpec};
pub use num_complex::Complex64;
pub use signal::{MomentReport, Signal, Spectrum, TimeGrid};
pub use transform::{ComplexGrid, GridKind, Marginal, RealGrid, TfGrid};
