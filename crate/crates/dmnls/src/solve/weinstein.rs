//! Ascent on `R_I(f) = ∫_I‖e^{rΔ}f‖_q^q dr / D(f)`.
//!
//! The ratio is invariant under `f ↦ cf`, and under dilations it obeys
//! `R_I(f(√τ·)) = τ^e R_{τI}(f)`. The iterate is therefore a mass-one grid
//! field `g` together with a scalar `s = ln τ`: the represented profile is
//! `g(√τ·)`. This lets the scale move in one step (and run off to a limit
//! when the supremum is not attained) without resampling the grid.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::functional::RatioKind;
use crate::quadrature::Window;
use crate::spectral::{laplacian, tail_mass_fraction, ComplexField};
use crate::window::{WindowRule, DEFAULT_T0};

use super::{canonicalize, precondition, SolverOptions, Status};

const ARMIJO_C1: f64 = 1e-4;
const STEP_MIN: f64 = 1e-14;

/// Ascent configuration beyond the generic solver options.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AscentSetup {
    pub kind: RatioKind,
    /// Gauss–Legendre nodes per time panel.
    pub m: usize,
    /// Direct/far-field split time.
    pub t0: f64,
    pub tau_min: f64,
    pub tau_max: f64,
    pub tau0: f64,
}

impl Default for AscentSetup {
    fn default() -> Self {
        Self { kind: RatioKind::GagliardoNirenberg, m: 32, t0: DEFAULT_T0, tau_min: 1e-3, tau_max: 1e3, tau0: 1.0 }
    }
}

/// Outcome of [`maximize_weinstein`].
#[derive(Clone, Debug)]
pub struct WeinsteinReport {
    /// The represented maximizer `g(√τ·)` with mass 1 (and kinetic 1 when the
    /// window is dilation invariant), on a relabelled grid.
    pub final_field: ComplexField,
    pub ratio: f64,
    pub window: Window,
    pub q: f64,
    pub kind: RatioKind,
    /// Final dilation `τ` of the grid iterate.
    pub dilation: f64,
    /// `Some(bound)` when `τ` ended pinned at `tau_min` or `tau_max`.
    pub dilation_at_bound: Option<f64>,
    pub iterations: usize,
    pub status: Status,
    /// Ratio after each accepted step.
    pub history: Vec<f64>,
}

struct Eval {
    log_ratio: f64,
    grad_f: ComplexField,
    grad_s: f64,
}

struct Problem<'a> {
    q: f64,
    kind: RatioKind,
    exponent: f64,
    base: &'a WindowRule,
    free_scale: bool,
}

impl Problem<'_> {
    fn eval(&self, f: &ComplexField, s: f64) -> Result<Eval> {
        let tau = s.exp();
        let rule = if self.free_scale { self.base.rescaled(tau)? } else { self.base.clone() };
        let (num, grad_n) = rule.integral_and_gradient(f, self.q)?;
        if !(num > 0.0) {
            return Err(Error::ZeroMass);
        }
        let mass = f.mass();
        let lap = laplacian(f);
        let kin = -lap.inner(f);
        if self.kind == RatioKind::GagliardoNirenberg && kin <= 0.0 {
            return Err(Error::ZeroKinetic);
        }
        let log_ratio = self.exponent * s + num.ln() - self.kind.log_denominator(self.q, mass, kin);
        // ∇ln N − ∇ln D, with ∇M = 2f and ∇K = −2Δf
        let mut grad_f = grad_n.scaled_re(1.0 / num);
        match self.kind {
            RatioKind::GagliardoNirenberg => {
                grad_f.axpy_in_place(2.0 / kin, &lap);
                grad_f.axpy_in_place(-(self.q - 2.0) / mass, f);
            }
            RatioKind::Strichartz => grad_f.axpy_in_place(-self.q / mass, f),
        }
        let mut grad_s = 0.0;
        if self.free_scale {
            grad_s = self.exponent;
            let w = self.base.window();
            for (end, sign) in [(w.hi, 1.0), (w.lo, -1.0)] {
                if end.is_finite() && end != 0.0 {
                    grad_s += sign * tau * end * rule.integrand(f, self.q, tau * end) / num;
                }
            }
        }
        Ok(Eval { log_ratio, grad_f, grad_s })
    }
}

/// Maximize the windowed ratio from `init`.
///
/// Dilation-invariant windows (`ℝ`, half-lines) keep `τ` fixed; they require
/// the dilation exponent of the ratio to vanish, otherwise the supremum is infinite.
pub fn maximize_weinstein(
    q: f64,
    window: Window,
    init: &ComplexField,
    opts: &SolverOptions,
    setup: &AscentSetup,
) -> Result<WeinsteinReport> {
    opts.validate()?;
    if !(setup.tau_min > 0.0 && setup.tau_min <= setup.tau0 && setup.tau0 <= setup.tau_max) {
        return invalid("need 0 < tau_min <= tau0 <= tau_max");
    }
    let m0 = init.mass();
    if m0 == 0.0 {
        return Err(Error::ZeroMass);
    }
    let exponent = setup.kind.dilation_exponent(q);
    let free_scale = !window.is_scale_free();
    if !free_scale && exponent != 0.0 {
        return invalid(format!(
            "ratio is not dilation invariant on {window} (exponent {exponent}); its supremum is infinite"
        ));
    }
    let base = WindowRule::new(window, setup.m, setup.t0)?;
    let prob = Problem { q, kind: setup.kind, exponent, base: &base, free_scale };
    let (s_lo, s_hi) = (setup.tau_min.ln(), setup.tau_max.ln());
    let clamp = |s: f64| if free_scale { s.clamp(s_lo, s_hi) } else { 0.0 };

    // the grid iterate keeps M = K = 1; dilations of g are carried by s
    let sigma0 = 1.0;
    let (f, shift) = retract(init, sigma0)?;
    let mut f = f;
    let mut s = clamp(setup.tau0.ln() + if free_scale { shift } else { 0.0 });
    let mut x = prob.eval(&f, s)?;
    let mut history = vec![x.log_ratio.exp()];
    let mut step = opts.step0;
    let mut status = Status::BudgetExhausted;
    let mut iterations = 0;
    let mut prev: Option<(ComplexField, f64, ComplexField, f64, ComplexField, f64)> = None;

    loop {
        let basis = scale_and_phase_free_basis(&f);
        let project = |v: &ComplexField| {
            let v = v.relabeled(f.grid().length()).expect("grid length is valid");
            basis.iter().fold(v, |acc, e| {
                let c = acc.inner(e);
                acc.axpy(-c, e)
            })
        };
        let gf = project(&x.grad_f);
        // a pinned scale only counts if the gradient pushes back inside
        let pinned_lo = free_scale && s <= s_lo && x.grad_s < 0.0;
        let pinned_hi = free_scale && s >= s_hi && x.grad_s > 0.0;
        let gs = if pinned_lo || pinned_hi { 0.0 } else { x.grad_s };
        let gnorm = (gf.mass() + gs * gs).sqrt();
        if gnorm <= opts.grad_tol {
            status = Status::Converged;
            break;
        }
        if iterations >= opts.max_iters {
            break;
        }
        let pf = project(&precondition(&gf, 1.0, 1.0 / sigma0));
        let ps = gs;
        let (mut df, mut ds) = (pf.clone(), ps);
        if let Some((g_old, gs_old, p_old, ps_old, d_old, ds_old)) = &prev {
            let (g_old, p_old) = (project(g_old), project(p_old));
            let denom = g_old.inner(&p_old) + gs_old * ps_old;
            let num = gf.inner(&pf) - gf.inner(&p_old) + gs * (ps - ps_old);
            let beta = if denom > 0.0 { (num / denom).max(0.0) } else { 0.0 };
            if beta > 0.0 {
                df = pf.axpy(beta, &project(d_old));
                ds = ps + beta * ds_old;
            }
            if gf.inner(&df) + gs * ds <= 0.0 {
                df = pf.clone();
                ds = ps;
            }
        }
        if pinned_lo || pinned_hi {
            ds = 0.0;
        }
        let slope = gf.inner(&df) + gs * ds;

        let mut blocked = false;
        let accepted = loop {
            let (ft, shift) = retract(&f.axpy(step, &df), sigma0)?;
            let st = clamp(s + step * ds + shift);
            if tail_mass_fraction(&ft) > opts.spread_tol {
                blocked = true;
            } else {
                match prob.eval(&ft, st) {
                    Ok(e) if e.log_ratio.is_finite() && e.log_ratio > x.log_ratio + ARMIJO_C1 * step * slope => {
                        break Some((ft, st, e));
                    }
                    _ => {}
                }
            }
            step *= opts.backtrack_factor;
            if step < STEP_MIN {
                break None;
            }
        };
        let Some((ft, st, e)) = accepted else {
            // stuck against the localization guard: the supremum is chasing a spreading profile
            status = if blocked { Status::Spreading } else { Status::Stalled };
            break;
        };
        iterations += 1;
        prev = Some((gf, gs, pf, ps, df, ds));
        f = ft;
        s = st;
        x = e;
        history.push(x.log_ratio.exp());
        step = (step * 1.5).min(1e3);
    }

    let tau = s.exp();
    let dilation_at_bound = if !free_scale {
        None
    } else if s <= s_lo {
        Some(setup.tau_min)
    } else if s >= s_hi {
        Some(setup.tau_max)
    } else {
        None
    };
    let final_field = represented(&canonicalize(&f), tau, free_scale)?;
    Ok(WeinsteinReport {
        final_field,
        ratio: x.log_ratio.exp(),
        window,
        q,
        kind: setup.kind,
        dilation: tau,
        dilation_at_bound,
        iterations,
        status,
        history,
    })
}

/// Orthonormal `{f, Δf}` (Gram–Schmidt, real inner product) together with `if`:
/// the mass, dilation and phase directions, none of which change the ratio
/// once `s` absorbs the dilation.
fn scale_and_phase_free_basis(f: &ComplexField) -> Vec<ComplexField> {
    let mut basis: Vec<ComplexField> = Vec::with_capacity(3);
    for v in [f.clone(), laplacian(f), f.scaled(crate::spectral::C64::new(0.0, 1.0))] {
        let w = basis.iter().fold(v, |acc, e| {
            let c = acc.inner(e);
            acc.axpy(-c, e)
        });
        let n = w.norm();
        if n > 1e-300 {
            basis.push(w.scaled_re(1.0 / n));
        }
    }
    basis
}

/// Back to mass 1 and `K/M = sigma0` by relabelling the box; returns the
/// field and the shift of `s = ln τ` that keeps the represented profile fixed.
fn retract(f: &ComplexField, sigma0: f64) -> Result<(ComplexField, f64)> {
    let (m, k) = (f.mass(), f.kinetic());
    if !(m > 0.0 && k > 0.0) {
        return Err(Error::ZeroKinetic);
    }
    // relabelling by L → L/c multiplies K/M by c²
    let c = (sigma0 * m / k).sqrt();
    let g = f.relabeled(f.grid().length() / c)?;
    let mg = g.mass();
    Ok((g.scaled_re(1.0 / mg.sqrt()), -2.0 * c.ln()))
}

/// `g(√τ·)` normalized to mass 1; for dilation-free windows also to kinetic 1.
fn represented(g: &ComplexField, tau: f64, free_scale: bool) -> Result<ComplexField> {
    let length = g.grid().length();
    let h = if free_scale {
        g.relabeled(length / tau.sqrt())?
    } else {
        let (m, k) = (g.mass(), g.kinetic());
        g.relabeled(length * (k / m).sqrt())?
    };
    let m = h.mass();
    Ok(h.scaled_re(1.0 / m.sqrt()))
}
