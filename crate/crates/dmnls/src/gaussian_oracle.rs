//! Closed-form Gaussian evolution and energies.
//!
//! A Gaussian `A·e^{-|x|²/σ₀}` evolves freely as `A·(σ₀/σ(r))·e^{-|x|²/σ(r)}`
//! with `σ(r) = σ₀ + 4ir`, so every space integral reduces to a 1D integral in `r`.

use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::quadrature::{integrate_adaptive, Window};
use crate::spectral::{sample_function, ComplexField, Grid, C64};

const ABS_TOL: f64 = 1e-14;
const REL_TOL: f64 = 1e-12;

/// Width and real prefactor of `A·e^{-|x|²/σ₀}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianParams {
    pub sigma0: f64,
    pub amplitude: f64,
}

impl GaussianParams {
    pub fn new(sigma0: f64, amplitude: f64) -> Result<Self> {
        if !(sigma0 > 0.0 && sigma0.is_finite()) {
            return invalid(format!("sigma0 = {sigma0} must be positive"));
        }
        if !(amplitude > 0.0 && amplitude.is_finite()) {
            return invalid(format!("amplitude = {amplitude} must be positive"));
        }
        Ok(Self { sigma0, amplitude })
    }

    /// Amplitude 1.
    pub fn bare(sigma0: f64) -> Result<Self> {
        Self::new(sigma0, 1.0)
    }

    /// Amplitude `(2λ/(πσ₀))^{1/2}`, i.e. mass `λ`.
    pub fn with_mass(lambda: f64, sigma0: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return invalid(format!("lambda = {lambda} must be positive"));
        }
        Self::new(sigma0, (2.0 * lambda / (PI * sigma0)).sqrt())
    }

    pub fn mass(&self) -> f64 {
        self.amplitude * self.amplitude * PI * self.sigma0 / 2.0
    }

    pub fn kinetic(&self) -> f64 {
        self.amplitude * self.amplitude * PI
    }
}

/// `∫_w (1+u²)^{-e} du`, as `∫ cos^{2e-2}θ dθ` after `u = tan θ` so that
/// wide and unbounded windows cost the same.
fn lorentz_power(e: f64, w: Window) -> f64 {
    let th = Window { lo: w.lo.atan(), hi: w.hi.atan() };
    integrate_adaptive(|t| t.cos().powf(2.0 * e - 2.0), th, ABS_TOL, REL_TOL)
}

/// `e^{irΔ}` applied to the Gaussian, evaluated at `x`.
pub fn evolved_gaussian(gp: &GaussianParams, r: f64, x: [f64; 2]) -> C64 {
    let sigma = C64::new(gp.sigma0, 4.0 * r);
    let x2 = x[0] * x[0] + x[1] * x[1];
    gp.amplitude * gp.sigma0 / sigma * (-x2 / sigma).exp()
}

/// `∫_window ‖e^{irΔ}g‖_q^q dr`.
pub fn window_qnorm(gp: &GaussianParams, q: f64, window: Window) -> Result<f64> {
    if !(q >= 2.0) {
        return invalid(format!("q = {q} must be at least 2"));
    }
    let s0 = gp.sigma0;
    if !window.is_bounded() && q <= 3.0 {
        return invalid(format!("unbounded window needs q > 3, got {q}"));
    }
    // σ₀^{q-1}·|σ(r)|^{2-q} = σ₀·(1+u²)^{(2-q)/2} with u = 4r/σ₀
    let inner = lorentz_power(0.5 * (q - 2.0), window.scaled(4.0 / s0));
    Ok(gp.amplitude.powf(q) * PI / q * s0 * s0 / 4.0 * inner)
}

/// Energy of the mass-`λ` Gaussian of width `σ₀`, by the closed formula.
pub fn gaussian_hamiltonian(lambda: f64, sigma0: f64, p: f64, dav: f64) -> f64 {
    // ∫₀¹ (1+(4r/σ₀)²)^{-(p-1)/2} dr
    let inner = sigma0 / 4.0 * lorentz_power(0.5 * (p - 1.0), Window::unit().scaled(4.0 / sigma0));
    let c = (2.0 * lambda).powf(0.5 * (p + 1.0)) * PI.powf(0.5 * (1.0 - p))
        / (dav * lambda * (p + 1.0).powi(2))
        * sigma0.powf(0.5 * (3.0 - p));
    dav * lambda / sigma0 * (1.0 - c * inner)
}

/// Energy of the mass-`λ` Gaussian pre-chirped as `e^{-icΔ}g`, whose free
/// evolution focuses at `r = c`. Propagation preserves the kinetic term, so
/// only the window of the potential shifts to `[-c, 1-c]`.
pub fn chirped_gaussian_hamiltonian(lambda: f64, sigma0: f64, focus: f64, p: f64, dav: f64) -> Result<f64> {
    let gp = GaussianParams::with_mass(lambda, sigma0)?;
    let pot = window_qnorm(&gp, p + 1.0, Window::unit().shifted(-focus))? / (p + 1.0);
    Ok(0.5 * dav * gp.kinetic() - pot)
}

/// Sample `A·e^{-|x|²/σ₀}` on a grid.
pub fn sample_gaussian(grid: &Grid, gp: &GaussianParams) -> Result<ComplexField> {
    sample_function(grid, |x, y| C64::new(gp.amplitude * (-(x * x + y * y) / gp.sigma0).exp(), 0.0))
}
