//! Time-window integrals `∫_I ‖e^{sΔ}f‖_q^q ds` for arbitrary (also unbounded) windows.
//!
//! On `|s| ≤ T₀` the propagator is applied directly. Farther out the evolved
//! field has left any fixed box, so the integral is rewritten through the
//! far-field (Fraunhofer) form of the free kernel:
//!
//! ```text
//! |e^{isΔ}f(x)| = (4π|s|)⁻¹ |ĝ_t(x/2s)|,   g_t = e^{±it|y|²} f,   t = 1/(4|s|)
//! ∫_{T₀}^{b} ‖e^{isΔ}f‖_q^q ds = π^{-q}/16 ∫_{1/4b}^{1/4T₀} t^{q-4} J(t) dt,   J(t) = ‖ĝ_t‖_q^q
//! ```
//!
//! `J` only needs the initial field on the grid, so unbounded windows cost a
//! handful of extra FFTs per node.

use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::functional::{direct_sum, power_and_nonlinearity};
use crate::par::tree_reduce;
use crate::quadrature::{gauss_legendre_rule, QuadratureRule, Window};
use crate::spectral::{ComplexField, Grid, C64};

/// Split point between direct propagation and the far-field form.
pub const DEFAULT_T0: f64 = 1.0;

#[derive(Clone, Debug)]
struct FarPanel {
    /// `+1` for positive times, `-1` for negative.
    sign: f64,
    tlo: f64,
    thi: f64,
    /// Gauss–Legendre rule on `[0, 1]`, mapped at evaluation time.
    reference: QuadratureRule,
}

/// Quadrature for a time window: direct Gauss–Legendre panels on the part
/// inside `[-T₀, T₀]` (split at 0 where the profile focuses) and far-field
/// panels beyond.
#[derive(Clone, Debug)]
pub struct WindowRule {
    window: Window,
    m: usize,
    t0: f64,
    direct: Option<QuadratureRule>,
    far: Vec<FarPanel>,
}

impl WindowRule {
    /// `m` nodes per panel.
    pub fn new(window: Window, m: usize, t0: f64) -> Result<Self> {
        if !(t0 > 0.0 && t0.is_finite()) {
            return invalid(format!("T0 = {t0} must be positive"));
        }
        let lo = window.lo.max(-t0);
        let hi = window.hi.min(t0);
        let direct = if lo < hi {
            let mut breaks = vec![lo];
            if lo < 0.0 && 0.0 < hi {
                breaks.push(0.0);
            }
            breaks.push(hi);
            Some(QuadratureRule::composite(m, &breaks)?)
        } else {
            None
        };
        let reference = gauss_legendre_rule(m, 0.0, 1.0)?;
        let mut far = Vec::new();
        let thi = 0.25 / t0;
        if window.hi > t0 {
            let start = window.lo.max(t0);
            far.push(FarPanel { sign: 1.0, tlo: 0.25 / window.hi, thi: 0.25 / start, reference: reference.clone() });
        }
        if window.lo < -t0 {
            let start = (-window.hi).max(t0);
            far.push(FarPanel { sign: -1.0, tlo: -0.25 / window.lo, thi: 0.25 / start, reference });
        }
        debug_assert!(far.iter().all(|p| p.thi <= thi + 1e-15 && p.tlo < p.thi));
        Ok(Self { window, m, t0, direct, far })
    }

    /// Plain `m`-point rule on `[0, 1]`.
    pub fn unit(m: usize) -> Result<Self> {
        Self::new(Window::unit(), m, DEFAULT_T0)
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    /// The direct part, if any.
    pub fn direct_rule(&self) -> Option<&QuadratureRule> {
        self.direct.as_ref()
    }

    /// Same construction for `τ·I`.
    pub fn rescaled(&self, tau: f64) -> Result<Self> {
        Self::new(self.window.scaled(tau), self.m, self.t0)
    }

    pub fn nodes_per_panel(&self) -> usize {
        self.m
    }

    fn check_q(&self, q: f64) -> Result<()> {
        if !(q >= 2.0) {
            return invalid(format!("q = {q} must be at least 2"));
        }
        if self.far.iter().any(|p| p.tlo == 0.0) && q <= 3.0 {
            return invalid(format!("unbounded window diverges for q = {q} <= 3"));
        }
        Ok(())
    }

    /// `∫_I ‖e^{sΔ}f‖_q^q ds`.
    pub fn integral(&self, f: &ComplexField, q: f64) -> Result<f64> {
        self.check_q(q)?;
        Ok(self.eval(f, q, false).0)
    }

    /// The integral and its gradient for the pairing `Re⟨·,·⟩`.
    pub fn integral_and_gradient(&self, f: &ComplexField, q: f64) -> Result<(f64, ComplexField)> {
        self.check_q(q)?;
        let (v, g) = self.eval(f, q, true);
        Ok((v, g.expect("gradient requested")))
    }

    /// Split time actually used on `grid`. The far-field chirp `e^{it|y|²}` is
    /// only resolved when `t·L ≲ π/dx`, so `T₀` never drops below `L·dx/2π`.
    pub fn effective_t0(&self, grid: &Grid) -> f64 {
        self.t0.max(grid.length() * grid.dx() / (2.0 * PI))
    }

    fn eval(&self, f: &ComplexField, q: f64, want: bool) -> (f64, Option<ComplexField>) {
        let t0 = self.effective_t0(f.grid());
        if t0 > self.t0 {
            let adapted = Self::new(self.window, self.m, t0).expect("split time is positive");
            return adapted.eval(f, q, want);
        }
        let grid = f.grid();
        let mut total = 0.0;
        let mut grad: Option<Vec<C64>> = want.then(|| vec![C64::new(0.0, 0.0); grid.len()]);
        if let Some(rule) = &self.direct {
            let (v, s) = direct_sum(f, &f.spectrum(), q, rule, want);
            total += v;
            if let (Some(g), Some(mut s)) = (grad.as_mut(), s) {
                grid.ifft2(&mut s);
                for (a, b) in g.iter_mut().zip(&s) {
                    *a += q * b;
                }
            }
        }
        for panel in &self.far {
            let (v, s) = far_panel_sum(f, q, panel, want);
            total += v;
            if let (Some(g), Some(s)) = (grad.as_mut(), s) {
                g.iter_mut().zip(&s).for_each(|(a, b)| *a += b);
            }
        }
        (total, grad.map(|g| ComplexField::raw(grid, g)))
    }

    /// Instantaneous `‖e^{sΔ}f‖_q^q` at a single time, consistent with the split at `T₀`.
    pub fn integrand(&self, f: &ComplexField, q: f64, s: f64) -> f64 {
        if s.abs() <= self.effective_t0(f.grid()) {
            let g = f.grid();
            let mut u = crate::spectral::propagate(f, s).into_values();
            return power_and_nonlinearity(g, &mut u, q, false);
        }
        let t = 0.25 / s.abs();
        let (j, _) = far_node(f, q, s.signum(), t, false);
        0.25 * PI.powf(-q) * t.powf(q - 2.0) * j
    }
}

fn chirp(grid: &Grid, sign: f64, t: f64) -> Vec<C64> {
    let n = grid.n();
    let mut c = Vec::with_capacity(n * n);
    for i in 0..n {
        let y1 = grid.coord(i);
        for j in 0..n {
            let y2 = grid.coord(j);
            c.push(C64::from_polar(1.0, sign * t * (y1 * y1 + y2 * y2)));
        }
    }
    c
}

/// `J(t)` and optionally its gradient `q·A·conj(c)·(n² IDFT(|h|^{q-2}h))`.
fn far_node(f: &ComplexField, q: f64, sign: f64, t: f64, want: bool) -> (f64, Option<Vec<C64>>) {
    let grid = f.grid();
    let c = chirp(grid, sign, t);
    let dx2 = grid.cell_area();
    let mut h: Vec<C64> = f.values().iter().zip(&c).map(|(a, b)| a * b * dx2).collect();
    grid.fft2(&mut h);
    let dk = 2.0 * PI / grid.length();
    let area_k = dk * dk;
    // power_and_nonlinearity integrates with dx²; rescale to the dk² measure
    let j = power_and_nonlinearity(grid, &mut h, q, want) / dx2 * area_k;
    if !want {
        return (j, None);
    }
    grid.ifft2_unscaled(&mut h);
    for (z, cc) in h.iter_mut().zip(&c) {
        *z = *z * cc.conj() * (q * area_k);
    }
    (j, Some(h))
}

fn far_panel_sum(f: &ComplexField, q: f64, panel: &FarPanel, want: bool) -> (f64, Option<Vec<C64>>) {
    // t = tlo + (thi - tlo)·v^α; α > 1 tames t^{q-4} near t = 0 when q < 4
    let alpha = if panel.tlo == 0.0 && q < 4.0 { 1.0 / (q - 3.0) } else { 1.0 };
    let span = panel.thi - panel.tlo;
    let rule = &panel.reference;
    let leaf = |k: usize| {
        let v = rule.nodes[k];
        let t = panel.tlo + span * v.powf(alpha);
        let jac = span * alpha * v.powf(alpha - 1.0);
        let coef = rule.weights[k] * jac * PI.powf(-q) / 16.0 * t.powf(q - 4.0);
        let (j, g) = far_node(f, q, panel.sign, t, want);
        (coef * j, g.map(|mut g| {
            g.iter_mut().for_each(|z| *z *= coef);
            g
        }))
    };
    tree_reduce(rule.len(), &leaf, &|a: (f64, Option<Vec<C64>>), b| {
        let s = match (a.1, b.1) {
            (Some(mut x), Some(y)) => {
                x.iter_mut().zip(&y).for_each(|(u, v)| *u += v);
                Some(x)
            }
            (x, None) => x,
            (None, y) => y,
        };
        (a.0 + b.0, s)
    })
    .unwrap_or((0.0, None))
}
