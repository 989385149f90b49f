use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::functional::ModelParams;
use crate::gaussian_oracle::chirped_gaussian_hamiltonian;
use crate::profiles::chirped_gaussian;
use crate::spectral::{ComplexField, Grid};

/// Choice of starting field for [`minimize_at_mass`](super::minimize_at_mass).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitRule {
    /// Mass-`λ` Gaussian with `σ₀ = λ`.
    LambdaWidth,
    /// Mass-`λ` Gaussian of the given width, focusing at `r = focus`.
    Gaussian { sigma0: f64, focus: f64 },
    /// Lowest closed-form energy among resolvable Gaussians, focus 0 or 1/2.
    BestGaussian,
    /// `BestGaussian` if it has negative energy, otherwise `LambdaWidth`.
    Auto,
}

/// The Gaussian actually used.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitChoice {
    pub sigma0: f64,
    pub focus: f64,
    /// Closed-form energy of the continuum Gaussian.
    pub predicted_energy: f64,
}

// e^{-18.4} ≈ 1e-8: the relative size of the neglected tails
const TAIL_EXP: f64 = 18.4;

/// Widths the grid can hold: resolved by `dx` and with mass beyond `L/4`
/// below 1e-8 at every time in the period.
fn admissible(grid: &Grid, sigma0: f64, focus: f64) -> bool {
    let dx = grid.dx();
    let resolved = sigma0 * (std::f64::consts::PI / dx).powi(2) / 4.0 >= TAIL_EXP;
    let r = 0.25 * grid.length();
    let worst = focus.abs().max((1.0 - focus).abs());
    let contained = 2.0 * sigma0 * r * r / (sigma0 * sigma0 + 16.0 * worst * worst) >= TAIL_EXP;
    resolved && contained
}

fn best_gaussian(grid: &Grid, params: &ModelParams) -> Result<Option<InitChoice>> {
    let lo = (4.0 * TAIL_EXP * grid.dx().powi(2) / std::f64::consts::PI.powi(2)).ln();
    let hi = ((0.25 * grid.length()).powi(2) * 2.0 / TAIL_EXP).ln();
    let mut best: Option<InitChoice> = None;
    for focus in [0.0, 0.5] {
        for k in 0..=96 {
            let sigma0 = (lo + (hi - lo) * k as f64 / 96.0).exp();
            if !admissible(grid, sigma0, focus) {
                continue;
            }
            let e = chirped_gaussian_hamiltonian(params.lambda, sigma0, focus, params.p, params.dav)?;
            if best.is_none_or(|b| e < b.predicted_energy) {
                best = Some(InitChoice { sigma0, focus, predicted_energy: e });
            }
        }
    }
    Ok(best)
}

/// Build the starting field for a minimization.
pub fn initial_guess(grid: &Grid, params: &ModelParams, rule: InitRule) -> Result<(ComplexField, InitChoice)> {
    let lambda_width = || -> Result<InitChoice> {
        let e = chirped_gaussian_hamiltonian(params.lambda, params.lambda, 0.0, params.p, params.dav)?;
        Ok(InitChoice { sigma0: params.lambda, focus: 0.0, predicted_energy: e })
    };
    let choice = match rule {
        InitRule::LambdaWidth => lambda_width()?,
        InitRule::Gaussian { sigma0, focus } => InitChoice {
            sigma0,
            focus,
            predicted_energy: chirped_gaussian_hamiltonian(params.lambda, sigma0, focus, params.p, params.dav)?,
        },
        InitRule::BestGaussian => match best_gaussian(grid, params)? {
            Some(c) => c,
            None => lambda_width()?,
        },
        InitRule::Auto => match best_gaussian(grid, params)? {
            Some(c) if c.predicted_energy < 0.0 => c,
            _ => lambda_width()?,
        },
    };
    let f = chirped_gaussian(grid, params.lambda, choice.sigma0, choice.focus)?;
    Ok((f, choice))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;

    #[test]
    fn auto_prefers_negative_gaussians() {
        let g = make_grid(128, 32.0).unwrap();
        // supercritical mass: a focused narrow Gaussian has negative energy
        let p = ModelParams::new(1.0, 5.0, 16.0).unwrap();
        let (_, c) = initial_guess(&g, &p, InitRule::Auto).unwrap();
        assert!(c.predicted_energy < 0.0 && c.focus == 0.5, "{c:?}");
        // well below threshold every Gaussian has positive energy
        let p = ModelParams::new(1.0, 5.0, 4.0).unwrap();
        let (f, c) = initial_guess(&g, &p, InitRule::Auto).unwrap();
        assert_eq!(c.sigma0, 4.0);
        assert!((f.mass() - 4.0).abs() < 1e-8);
    }
}
