use crate::error::{Error, Result};
use crate::functional::{energy_and_gradient, multiplier_from, EnergyBreakdown, ModelParams, QuadratureRule};
use crate::profiles::smooth_noise;
use crate::spectral::{tail_mass_fraction, ComplexField};

use super::{canonicalize, precondition, Method, SolverOptions, Status};

const ARMIJO_C1: f64 = 1e-4;
const STEP_GROWTH: f64 = 1.5;
const STEP_MAX: f64 = 1e3;
const STEP_MIN: f64 = 1e-14;

/// Outcome of [`minimize_at_mass`].
#[derive(Clone, Debug)]
pub struct MinimizeReport {
    pub final_field: ComplexField,
    pub energy: EnergyBreakdown,
    pub omega: f64,
    /// `‖∇H(f) + ωf‖₂`.
    pub el_residual: f64,
    pub iterations: usize,
    pub status: Status,
    /// `H` after each accepted step (index 0 is the initial field).
    pub history: Vec<f64>,
    /// Accepted step at which `H` first fell below the energy floor.
    pub floor_crossing: Option<usize>,
    /// Mass fraction beyond `L/4` of the centroid at exit.
    pub tail_fraction: f64,
}

impl MinimizeReport {
    /// Found a genuinely negative, localized state (the threshold predicate).
    pub fn is_negative(&self, eps: f64) -> bool {
        match self.status {
            Status::EnergyUnbounded => true,
            Status::Spreading => false,
            _ => self.energy.total < -eps && self.tail_fraction <= 1e-2,
        }
    }
}

struct Point {
    f: ComplexField,
    e: EnergyBreakdown,
    grad: ComplexField,
}

impl Point {
    fn new(f: ComplexField, params: &ModelParams, rule: &QuadratureRule) -> Self {
        let (e, grad) = energy_and_gradient(&f, params, rule);
        Self { f, e, grad }
    }

    /// `ω` and the projected gradient `G + ωf`.
    fn projected(&self) -> (f64, ComplexField) {
        let omega = -self.grad.inner(&self.f) / self.e.mass;
        (omega, self.grad.axpy(omega, &self.f))
    }
}

fn rescale(f: ComplexField, lambda: f64) -> ComplexField {
    let m = f.mass();
    f.scaled_re((lambda / m).sqrt())
}

/// Minimize `H` on the sphere `‖f‖² = λ` by projected descent with Armijo backtracking.
///
/// Each step moves along a tangent direction, rescales back to mass `λ`, and
/// accepts once `H(f') < H(f) − c₁τ⟨G⊥, D⟩`.
pub fn minimize_at_mass(
    params: &ModelParams,
    init: &ComplexField,
    opts: &SolverOptions,
    rule: &QuadratureRule,
) -> Result<MinimizeReport> {
    opts.validate()?;
    let m0 = init.mass();
    if m0 == 0.0 {
        return Err(Error::ZeroMass);
    }
    let lambda = params.lambda;
    let mut f0 = init.clone();
    if opts.init_noise > 0.0 {
        let noise = smooth_noise(init.grid(), opts.seed, opts.init_noise * m0.sqrt());
        f0 = f0.axpy(1.0, &noise);
    }
    let mut x = Point::new(rescale(f0, lambda), params, rule);
    let mut history = vec![x.e.total];
    let mut tau = opts.step0;
    let mut status = Status::BudgetExhausted;
    let mut floor_crossing = None;
    let mut iterations = 0;
    // previous (G⊥, P, D) for the conjugate-gradient update
    let mut prev: Option<(ComplexField, ComplexField, ComplexField)> = None;
    let mut kinetic_trace: Vec<f64> = vec![x.e.kinetic];

    loop {
        let (omega, gp) = x.projected();
        if gp.norm() <= opts.grad_tol {
            status = Status::Converged;
            break;
        }
        if iterations >= opts.max_iters {
            break;
        }
        let m = x.e.mass;
        let tangent = |v: ComplexField| {
            let c = v.inner(&x.f) / m;
            v.axpy(-c, &x.f)
        };
        let (p, d) = match opts.method {
            Method::Steepest => (gp.clone(), gp.clone()),
            Method::ConjugateGradient => {
                let kin = 2.0 * x.e.kinetic / params.dav;
                let shift = omega.max(params.dav * kin / m).max(1e-12);
                let p = tangent(precondition(&gp, shift, params.dav));
                let mut d = p.clone();
                if let Some((g_old, p_old, d_old)) = &prev {
                    let denom = g_old.inner(p_old);
                    let beta = if denom > 0.0 { (gp.inner(&p) - gp.inner(p_old)) / denom } else { 0.0 };
                    if beta > 0.0 {
                        d = p.axpy(beta, &tangent(d_old.clone()));
                    }
                    if gp.inner(&d) <= 0.0 {
                        d = p.clone();
                    }
                }
                (p, d)
            }
        };
        let slope = gp.inner(&d);

        let accepted = loop {
            let trial = Point::new(rescale(x.f.axpy(-tau, &d), lambda), params, rule);
            if trial.e.total.is_finite() && trial.e.total < x.e.total - ARMIJO_C1 * tau * slope {
                break Some(trial);
            }
            tau *= opts.backtrack_factor;
            if tau < STEP_MIN {
                break None;
            }
        };
        let Some(next) = accepted else {
            status = Status::Stalled;
            break;
        };
        iterations += 1;
        x = next;
        history.push(x.e.total);
        kinetic_trace.push(x.e.kinetic);
        prev = Some((gp, p, d));
        tau = (tau * STEP_GROWTH).min(STEP_MAX);

        if x.e.total < opts.energy_floor {
            floor_crossing = Some(iterations);
            status = Status::EnergyUnbounded;
            break;
        }
        if is_spreading(&x, &kinetic_trace, params, opts) {
            status = Status::Spreading;
            break;
        }
    }

    let tail_fraction = tail_mass_fraction(&x.f);
    let x = if status == Status::EnergyUnbounded { x } else { Point::new(canonicalize(&x.f), params, rule) };
    let (_, gp) = x.projected();
    Ok(MinimizeReport {
        omega: multiplier_from(&x.e, params),
        el_residual: gp.norm(),
        energy: x.e,
        final_field: x.f,
        iterations,
        status,
        history,
        floor_crossing,
        tail_fraction,
    })
}

/// Mass leaking over the box while the profile broadens, or a kinetic term
/// melting away at zero energy. A collapsing profile (kinetic growing) can
/// shed a tail without dispersing, so it is not flagged.
fn is_spreading(x: &Point, kin: &[f64], params: &ModelParams, opts: &SolverOptions) -> bool {
    if x.e.kinetic < kin[0] && tail_mass_fraction(&x.f) > opts.spread_tol {
        return true;
    }
    const WINDOW: usize = 10;
    if kin.len() <= WINDOW {
        return false;
    }
    let recent = &kin[kin.len() - WINDOW..];
    let falling = recent.windows(2).all(|w| w[1] < w[0]);
    let kinetic_norm = 2.0 * x.e.kinetic / params.dav;
    falling && kinetic_norm < 1e-3 && x.e.total.abs() < 1e-6
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::{gauss_legendre_rule, gradient_h, lagrange_multiplier, DEFAULT_NODES};
    use crate::solve::{initial_guess, InitRule};
    use crate::spectral::make_grid;

    #[test]
    fn subcritical_ground_state_small() {
        // quick, coarse instance of the p = 2 ground state
        let g = make_grid(64, 48.0).unwrap();
        let params = ModelParams::new(1.0, 2.0, 5.0).unwrap();
        let rule = gauss_legendre_rule(16, 0.0, 1.0).unwrap();
        let (init, _) = initial_guess(&g, &params, InitRule::Auto).unwrap();
        let opts = SolverOptions { grad_tol: 1e-7, ..Default::default() };
        let rep = minimize_at_mass(&params, &init, &opts, &rule).unwrap();
        assert_eq!(rep.status, Status::Converged, "{:?}", rep.history.last());
        assert!(rep.energy.total < 0.0);
        assert!((rep.final_field.mass() - 5.0).abs() < 1e-10 * 5.0);
        assert!(rep.history.windows(2).all(|w| w[1] < w[0]));
        assert!(rep.omega > -2.0 * rep.energy.total / 5.0);
        let om = lagrange_multiplier(&rep.final_field, &params, &rule).unwrap();
        assert!((om - rep.omega).abs() < 1e-12 * om.abs());
        let r = gradient_h(&rep.final_field, &params, &rule).axpy(rep.omega, &rep.final_field).norm();
        assert!(r <= 1e-7);
    }

    #[test]
    fn steepest_descent_decreases_energy() {
        let g = make_grid(32, 24.0).unwrap();
        let params = ModelParams::new(1.0, 2.0, 5.0).unwrap();
        let rule = gauss_legendre_rule(8, 0.0, 1.0).unwrap();
        let (init, _) = initial_guess(&g, &params, InitRule::Gaussian { sigma0: 4.0, focus: 0.0 }).unwrap();
        let opts = SolverOptions { method: Method::Steepest, max_iters: 30, step0: 0.01, ..Default::default() };
        let rep = minimize_at_mass(&params, &init, &opts, &rule).unwrap();
        assert!(rep.history.windows(2).all(|w| w[1] < w[0]));
        assert!(rep.iterations > 0);
    }

    #[test]
    fn rejects_zero_init() {
        let g = make_grid(16, 8.0).unwrap();
        let params = ModelParams::new(1.0, 2.0, 1.0).unwrap();
        let rule = gauss_legendre_rule(DEFAULT_NODES, 0.0, 1.0).unwrap();
        let err = minimize_at_mass(&params, &ComplexField::zeros(&g), &SolverOptions::default(), &rule);
        assert!(matches!(err, Err(Error::ZeroMass)));
    }
}
