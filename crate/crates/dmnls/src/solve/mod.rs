//! Mass-constrained minimization of `H` and ascent on Weinstein-type ratios.

mod init;
mod minimize;
mod weinstein;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::spectral::{centroid, translate, ComplexField, C64};

pub use init::{initial_guess, InitChoice, InitRule};
pub use minimize::{minimize_at_mass, MinimizeReport};
pub use weinstein::{maximize_weinstein, AscentSetup, WeinsteinReport};

/// Search direction for the minimizer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Projected gradient `f ← f − τ G⊥`.
    Steepest,
    /// Polak–Ribière+ conjugate gradient on the mass sphere, preconditioned
    /// by `(s + d_av|k|²)⁻¹`.
    ConjugateGradient,
}

impl std::str::FromStr for Method {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cg" | "conjugate-gradient" => Ok(Self::ConjugateGradient),
            "sd" | "steepest" => Ok(Self::Steepest),
            _ => invalid(format!("unknown method {s:?} (use cg or sd)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub max_iters: usize,
    pub step0: f64,
    pub backtrack_factor: f64,
    /// Stop when the projected gradient has L² norm at most this.
    pub grad_tol: f64,
    /// Give up and report an unbounded flow once `H` drops below this.
    pub energy_floor: f64,
    pub seed: u64,
    pub method: Method,
    /// Mass fraction beyond `L/4` from the centroid that counts as spreading.
    pub spread_tol: f64,
    /// Relative size of the seeded perturbation added to the initial field.
    pub init_noise: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iters: 2000,
            step0: 1.0,
            backtrack_factor: 0.5,
            grad_tol: 1e-6,
            energy_floor: -1e3,
            seed: 0,
            method: Method::ConjugateGradient,
            spread_tol: 1e-2,
            init_noise: 0.0,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters < 1 {
            return invalid("max_iters must be at least 1");
        }
        if !(self.backtrack_factor > 0.0 && self.backtrack_factor < 1.0) {
            return invalid(format!("backtrack_factor = {} must lie in (0, 1)", self.backtrack_factor));
        }
        if !(self.grad_tol > 0.0) {
            return invalid(format!("grad_tol = {} must be positive", self.grad_tol));
        }
        if !(self.step0 > 0.0 && self.step0.is_finite()) {
            return invalid(format!("step0 = {} must be positive", self.step0));
        }
        if !(self.spread_tol > 0.0 && self.spread_tol < 1.0) {
            return invalid(format!("spread_tol = {} must lie in (0, 1)", self.spread_tol));
        }
        if !(self.init_noise >= 0.0) {
            return invalid("init_noise must be nonnegative");
        }
        Ok(())
    }
}

/// How a solver run ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Converged,
    BudgetExhausted,
    /// `H` crossed the energy floor.
    EnergyUnbounded,
    /// The profile is dispersing over the box instead of localizing.
    Spreading,
    /// The line search could not make progress (rounding floor).
    Stalled,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Status::Converged => "converged",
            Status::BudgetExhausted => "budget-exhausted",
            Status::EnergyUnbounded => "energy-unbounded",
            Status::Spreading => "spreading",
            Status::Stalled => "stalled",
        };
        f.write_str(s)
    }
}

/// Fix translation and phase: density centroid at the origin, `f(0)` real and nonnegative.
pub fn canonicalize(f: &ComplexField) -> ComplexField {
    let c = centroid(f);
    let g = translate(f, [-c[0], -c[1]]);
    let z = g.at_origin();
    if z.norm() == 0.0 {
        return g;
    }
    g.scaled(C64::from_polar(1.0, -z.arg()))
}

/// `(σ + d|k|²)⁻¹ v` in Fourier space.
pub(crate) fn precondition(v: &ComplexField, shift: f64, d: f64) -> ComplexField {
    crate::spectral::apply_multiplier(v, |kk| C64::new(1.0 / (shift + d * kk), 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::random_smooth;
    use crate::spectral::make_grid;

    #[test]
    fn options_validation() {
        assert!(SolverOptions::default().validate().is_ok());
        let bad = [
            SolverOptions { max_iters: 0, ..Default::default() },
            SolverOptions { backtrack_factor: 1.0, ..Default::default() },
            SolverOptions { grad_tol: 0.0, ..Default::default() },
        ];
        assert!(bad.iter().all(|o| o.validate().is_err()));
    }

    #[test]
    fn canonical_form() {
        let g = make_grid(64, 16.0).unwrap();
        let f = random_smooth(&g, 2, 1.0);
        let c = canonicalize(&f);
        let z = c.at_origin();
        assert!(z.im.abs() < 1e-12 && z.re >= 0.0);
        let cc = centroid(&c);
        assert!(cc[0].abs() < 1e-6 && cc[1].abs() < 1e-6);
        assert!((c.mass() - f.mass()).abs() < 1e-12 * f.mass());
    }
}
