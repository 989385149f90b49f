//! Browser demo bindings: free Gaussian propagation, Gaussian energy landscapes
//! and a ground-state descent that can be advanced a few steps at a time.

use dmnls::functional::{gauss_legendre_rule, hamiltonian, ModelParams, QuadratureRule};
use dmnls::gaussian_oracle::{chirped_gaussian_hamiltonian, evolved_gaussian, sample_gaussian, GaussianParams};
use dmnls::solve::{canonicalize, initial_guess, minimize_at_mass, InitRule, SolverOptions, Status};
use dmnls::spectral::{make_grid, propagate, ComplexField};
use wasm_bindgen::prelude::*;

fn js(e: dmnls::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn density(f: &ComplexField) -> Vec<f64> {
    f.values().iter().map(|z| z.norm_sqr()).collect()
}

/// `|e^{irΔ}g|²` of the unit-amplitude Gaussian on an `n × n` grid.
#[wasm_bindgen]
pub struct Propagation {
    density: Vec<f64>,
    max_error: f64,
    peak: f64,
}

#[wasm_bindgen]
impl Propagation {
    /// Row-major density, length `n²`.
    #[wasm_bindgen(getter)]
    pub fn density(&self) -> Vec<f64> {
        self.density.clone()
    }

    /// Largest pointwise deviation of the spectral solution from the closed form.
    #[wasm_bindgen(getter, js_name = maxError)]
    pub fn max_error(&self) -> f64 {
        self.max_error
    }

    #[wasm_bindgen(getter)]
    pub fn peak(&self) -> f64 {
        self.peak
    }
}

#[wasm_bindgen(js_name = propagateGaussian)]
pub fn propagate_gaussian(sigma0: f64, r: f64, n: usize, length: f64) -> Result<Propagation, JsError> {
    let grid = make_grid(n, length).map_err(js)?;
    let gp = GaussianParams::bare(sigma0).map_err(js)?;
    let u = propagate(&sample_gaussian(&grid, &gp).map_err(js)?, r);
    let mut max_error = 0.0f64;
    for (k, z) in u.values().iter().enumerate() {
        let x = [grid.coord(k / n), grid.coord(k % n)];
        max_error = max_error.max((z - evolved_gaussian(&gp, r, x)).norm());
    }
    let density = density(&u);
    let peak = density.iter().copied().fold(0.0, f64::max);
    Ok(Propagation { density, max_error, peak })
}

/// Closed-form `H` of the mass-`λ` Gaussian at each width, focusing at `r = focus`.
#[wasm_bindgen(js_name = gaussianEnergyCurve)]
pub fn gaussian_energy_curve(lambda: f64, p: f64, dav: f64, focus: f64, sigmas: Vec<f64>) -> Result<Vec<f64>, JsError> {
    sigmas.iter().map(|&s| chirped_gaussian_hamiltonian(lambda, s, focus, p, dav).map_err(js)).collect()
}

/// Ground-state descent at fixed mass, advanced in chunks so the page stays responsive.
#[wasm_bindgen]
pub struct GroundState {
    params: ModelParams,
    rule: QuadratureRule,
    field: ComplexField,
    history: Vec<f64>,
    omega: f64,
    residual: f64,
    status: Status,
    iterations: usize,
}

#[wasm_bindgen]
impl GroundState {
    #[wasm_bindgen(constructor)]
    pub fn new(p: f64, lambda: f64, dav: f64, n: usize, length: f64) -> Result<GroundState, JsError> {
        let params = ModelParams::new(dav, p, lambda).map_err(js)?;
        let grid = make_grid(n, length).map_err(js)?;
        let (field, _) = initial_guess(&grid, &params, InitRule::LambdaWidth).map_err(js)?;
        let rule = gauss_legendre_rule(16, 0.0, 1.0).map_err(js)?;
        let h = hamiltonian(&field, &params, &rule).total;
        Ok(GroundState {
            params,
            rule,
            field,
            history: vec![h],
            omega: f64::NAN,
            residual: f64::NAN,
            status: Status::BudgetExhausted,
            iterations: 0,
        })
    }

    /// Run up to `steps` descent iterations from the current field.
    pub fn advance(&mut self, steps: usize) -> Result<(), JsError> {
        if self.done() {
            return Ok(());
        }
        let opts = SolverOptions { max_iters: steps.max(1), grad_tol: 1e-6, ..SolverOptions::default() };
        let rep = minimize_at_mass(&self.params, &self.field, &opts, &self.rule).map_err(js)?;
        self.history.extend_from_slice(&rep.history[1..]);
        self.iterations += rep.iterations;
        self.field = canonicalize(&rep.final_field);
        self.omega = rep.omega;
        self.residual = rep.el_residual;
        self.status = rep.status;
        Ok(())
    }

    /// No further progress is expected.
    pub fn done(&self) -> bool {
        self.status != Status::BudgetExhausted
    }

    pub fn energy(&self) -> f64 {
        *self.history.last().unwrap_or(&f64::NAN)
    }

    pub fn history(&self) -> Vec<f64> {
        self.history.clone()
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn status(&self) -> String {
        self.status.to_string()
    }

    pub fn density(&self) -> Vec<f64> {
        density(&self.field)
    }

    pub fn n(&self) -> usize {
        self.field.grid().n()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn propagation_matches_closed_form() {
        let p = propagate_gaussian(1.0, 0.3, 128, 24.0).map_err(|_| ()).unwrap();
        assert!(p.max_error() < 1e-10, "{}", p.max_error());
        assert_eq!(p.density().len(), 128 * 128);
        // |σ₀/σ(r)|² with σ = σ₀ + 4ir
        assert!((p.peak() - 1.0 / (1.0 + 1.44)).abs() < 1e-10);
    }

    #[test]
    fn energy_curve_is_closed_form() {
        let h = gaussian_energy_curve(1.0, 3.0, 1.0, 0.0, vec![1.0]).map_err(|_| ()).unwrap();
        assert!((h[0] - (1.0 - 4f64.atan() / (16.0 * std::f64::consts::PI))).abs() < 1e-12);
    }

    #[test]
    fn chunked_descent_reaches_a_negative_state() {
        let mut g = GroundState::new(2.0, 5.0, 1.0, 64, 48.0).map_err(|_| ()).unwrap();
        let h0 = g.energy();
        for _ in 0..20 {
            g.advance(5).map_err(|_| ()).unwrap();
            if g.done() {
                break;
            }
        }
        assert!(g.energy() < h0 && g.energy() < 0.0, "{} -> {} ({})", h0, g.energy(), g.status());
        assert!(g.history().windows(2).all(|w| w[1] <= w[0] + 1e-9));
    }
}
