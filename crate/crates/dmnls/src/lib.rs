//! Variational numerics for the two-dimensional dispersion-managed NLS
//!
//! ```text
//! i∂ₜu + d_av Δu + ∫₀¹ e^{−irΔ}(|e^{irΔ}u|^{p−1} e^{irΔ}u) dr = 0
//! ```
//!
//! on a periodic pseudo-spectral grid: the nonlocal Hamiltonian and its
//! gradient, mass-constrained minimizers, Weinstein-type ratio maximizers,
//! closed-form Gaussian oracles and threshold-mass experiments.

// `!(x > 0.0)` is used on purpose so NaN inputs are rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
mod par;
pub mod spectral;
pub mod quadrature;
pub mod gaussian_oracle;
pub mod functional;
pub mod window;
pub mod profiles;
pub mod solve;
pub mod threshold;
pub mod io_report;

pub use error::{Error, Result};
pub use par::set_threads;
