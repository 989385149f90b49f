//! The nonlocal Hamiltonian
//!
//! ```text
//! H(f) = (d_av/2)‖∇f‖² − 1/(p+1) ∫₀¹ ‖e^{irΔ}f‖_{p+1}^{p+1} dr
//! ```
//!
//! with its gradient, Lagrange multiplier and Weinstein-type ratios.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::par::tree_reduce;
use crate::spectral::{kinetic_from_spectrum, ComplexField, Grid, C64};
use crate::window::WindowRule;

pub use crate::quadrature::{gauss_legendre_rule, QuadratureRule};

/// Default Gauss–Legendre order on the dispersion period.
pub const DEFAULT_NODES: usize = 32;

/// Physical parameters `(d_av, p, λ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub dav: f64,
    pub p: f64,
    pub lambda: f64,
}

impl ModelParams {
    pub fn new(dav: f64, p: f64, lambda: f64) -> Result<Self> {
        if !(dav > 0.0 && dav.is_finite()) {
            return invalid(format!("d_av = {dav} must be positive"));
        }
        if !(p > 1.0 && p.is_finite()) {
            return invalid(format!("p = {p} must exceed 1"));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return invalid(format!("lambda = {lambda} must be positive"));
        }
        Ok(Self { dav, p, lambda })
    }

    /// `q = p + 1`.
    pub fn q(&self) -> f64 {
        self.p + 1.0
    }
}

/// The two terms of `H` and the mass of the field they were computed on.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergyBreakdown {
    pub kinetic: f64,
    pub potential: f64,
    pub total: f64,
    pub mass: f64,
}

/// `|u|^e` from `|u|²`, with fast paths for the common integer cases.
#[inline]
pub(crate) fn abs_pow(a2: f64, e: f64) -> f64 {
    if e == 2.0 {
        a2
    } else if e == 4.0 {
        a2 * a2
    } else if e == 1.0 {
        a2.sqrt()
    } else if e == 0.0 {
        1.0
    } else if a2 == 0.0 {
        0.0
    } else {
        a2.powf(0.5 * e)
    }
}

/// `dx²·Σ|u|^q` and, if asked, `|u|^{q-2}u`, both computed in one pass.
pub(crate) fn power_and_nonlinearity(grid: &Grid, u: &mut [C64], q: f64, want: bool) -> f64 {
    let n = grid.n();
    let mut partial = Vec::with_capacity(n);
    for row in u.chunks_mut(n) {
        let mut s = 0.0;
        for z in row.iter_mut() {
            let a2 = z.norm_sqr();
            let m = abs_pow(a2, q - 2.0);
            s += m * a2;
            if want {
                *z *= m;
            }
        }
        partial.push(s);
    }
    crate::par::pairwise_sum(&partial) * grid.cell_area()
}

/// One time node: `‖e^{irΔ}f‖_q^q` and optionally `e^{-irΔ}(|u|^{q-2}u)` in Fourier space.
fn direct_node(grid: &Grid, fhat: &[C64], r: f64, q: f64, want: bool) -> (f64, Option<Vec<C64>>) {
    let mut u: Vec<C64> =
        fhat.iter().zip(grid.k2()).map(|(z, &kk)| z * C64::from_polar(1.0, -r * kk)).collect();
    grid.ifft2(&mut u);
    let val = power_and_nonlinearity(grid, &mut u, q, want);
    if !want {
        return (val, None);
    }
    grid.fft2(&mut u);
    for (z, &kk) in u.iter_mut().zip(grid.k2()) {
        *z *= C64::from_polar(1.0, r * kk);
    }
    (val, Some(u))
}

fn add_spectra(a: Option<Vec<C64>>, b: Option<Vec<C64>>) -> Option<Vec<C64>> {
    match (a, b) {
        (Some(mut a), Some(b)) => {
            a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
            Some(a)
        }
        (a, None) => a,
        (None, b) => b,
    }
}

/// Weighted sum over the rule of `‖e^{r_jΔ}f‖_q^q`, plus the weighted
/// back-propagated nonlinearity (still in Fourier space) when `want`.
pub(crate) fn direct_sum(
    f: &ComplexField,
    fhat: &[C64],
    q: f64,
    rule: &QuadratureRule,
    want: bool,
) -> (f64, Option<Vec<C64>>) {
    let grid = f.grid();
    let leaf = |j: usize| {
        let (v, s) = direct_node(grid, fhat, rule.nodes[j], q, want);
        let w = rule.weights[j];
        (w * v, s.map(|mut s| {
            s.iter_mut().for_each(|z| *z *= w);
            s
        }))
    };
    tree_reduce(rule.len(), &leaf, &|a: (f64, Option<Vec<C64>>), b| (a.0 + b.0, add_spectra(a.1, b.1)))
        .unwrap_or((0.0, None))
}

/// `∫ ‖e^{irΔ}f‖_q^q dr` by the rule.
pub fn qnorm_integral(f: &ComplexField, q: f64, rule: &QuadratureRule) -> f64 {
    direct_sum(f, &f.spectrum(), q, rule, false).0
}

/// `∫₀¹ ‖e^{irΔ}f‖_{p+1}^{p+1} dr`.
pub fn potential_term(f: &ComplexField, p: f64, rule: &QuadratureRule) -> f64 {
    qnorm_integral(f, p + 1.0, rule)
}

/// `N(f) = ∫ e^{-irΔ}(|u|^{p-1}u) dr` with `u = e^{irΔ}f`.
pub fn nonlocal_force(f: &ComplexField, p: f64, rule: &QuadratureRule) -> ComplexField {
    let grid = f.grid();
    match direct_sum(f, &f.spectrum(), p + 1.0, rule, true).1 {
        Some(mut s) => {
            grid.ifft2(&mut s);
            ComplexField::raw(grid, s)
        }
        None => ComplexField::zeros(grid),
    }
}

/// `H(f)` split into its terms.
pub fn hamiltonian(f: &ComplexField, params: &ModelParams, rule: &QuadratureRule) -> EnergyBreakdown {
    let fhat = f.spectrum();
    let kin = kinetic_from_spectrum(f.grid(), &fhat);
    let pot = direct_sum(f, &fhat, params.q(), rule, false).0;
    breakdown(params, kin, pot, f.mass())
}

fn breakdown(params: &ModelParams, kin: f64, pot: f64, mass: f64) -> EnergyBreakdown {
    let kinetic = 0.5 * params.dav * kin;
    let potential = pot / params.q();
    EnergyBreakdown { kinetic, potential, total: kinetic - potential, mass }
}

/// `H(f)` and `∇H(f) = -d_av Δf - N(f)` sharing the propagations.
pub fn energy_and_gradient(
    f: &ComplexField,
    params: &ModelParams,
    rule: &QuadratureRule,
) -> (EnergyBreakdown, ComplexField) {
    let grid = f.grid();
    let fhat = f.spectrum();
    let kin = kinetic_from_spectrum(grid, &fhat);
    let (pot, force) = direct_sum(f, &fhat, params.q(), rule, true);
    let mut g: Vec<C64> = fhat.iter().zip(grid.k2()).map(|(z, &kk)| z * (params.dav * kk)).collect();
    if let Some(force) = force {
        g.iter_mut().zip(&force).for_each(|(a, b)| *a -= b);
    }
    grid.ifft2(&mut g);
    (breakdown(params, kin, pot, f.mass()), ComplexField::raw(grid, g))
}

/// Gradient of `H` for the pairing `Re⟨f, g⟩`.
pub fn gradient_h(f: &ComplexField, params: &ModelParams, rule: &QuadratureRule) -> ComplexField {
    energy_and_gradient(f, params, rule).1
}

/// `ω = (∫₀¹‖e^{irΔ}f‖_{p+1}^{p+1} − d_av‖∇f‖²) / ‖f‖²`.
pub fn lagrange_multiplier(f: &ComplexField, params: &ModelParams, rule: &QuadratureRule) -> Result<f64> {
    let m = f.mass();
    if m == 0.0 {
        return Err(Error::ZeroMass);
    }
    let e = hamiltonian(f, params, rule);
    Ok(multiplier_from(&e, params))
}

/// The multiplier from an already computed breakdown.
pub fn multiplier_from(e: &EnergyBreakdown, params: &ModelParams) -> f64 {
    (params.q() * e.potential - 2.0 * e.kinetic) / e.mass
}

/// Denominator of a best-constant ratio.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RatioKind {
    /// `‖∇f‖²·‖f‖^{q-2}`
    GagliardoNirenberg,
    /// `‖f‖^q`
    Strichartz,
}

impl RatioKind {
    /// `log` of the denominator for the given norms.
    pub(crate) fn log_denominator(self, q: f64, mass: f64, kinetic: f64) -> f64 {
        match self {
            RatioKind::GagliardoNirenberg => kinetic.ln() + 0.5 * (q - 2.0) * mass.ln(),
            RatioKind::Strichartz => 0.5 * q * mass.ln(),
        }
    }

    /// Exponent `e` with `R_I(f(√τ·)) = τ^e R_{τI}(f)`.
    pub fn dilation_exponent(self, q: f64) -> f64 {
        match self {
            RatioKind::GagliardoNirenberg => 0.5 * (q - 6.0),
            RatioKind::Strichartz => 0.5 * (q - 4.0),
        }
    }
}

impl std::str::FromStr for RatioKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gn" | "gagliardo-nirenberg" => Ok(Self::GagliardoNirenberg),
            "strichartz" | "st" => Ok(Self::Strichartz),
            _ => invalid(format!("unknown ratio kind {s:?} (use gn or strichartz)")),
        }
    }
}

/// Windowed ratio of the requested kind.
pub fn ratio(f: &ComplexField, q: f64, rule: &WindowRule, kind: RatioKind) -> Result<f64> {
    let (m, k) = (f.mass(), f.kinetic());
    if m == 0.0 {
        return Err(Error::ZeroMass);
    }
    if kind == RatioKind::GagliardoNirenberg && k == 0.0 {
        return Err(Error::ZeroKinetic);
    }
    let num = rule.integral(f, q)?;
    Ok((num.ln() - kind.log_denominator(q, m, k)).exp())
}

/// `∫_I‖e^{irΔ}f‖_q^q dr / (‖∇f‖²‖f‖^{q-2})`.
pub fn weinstein_ratio(f: &ComplexField, q: f64, rule: &WindowRule) -> Result<f64> {
    ratio(f, q, rule, RatioKind::GagliardoNirenberg)
}

/// `∫_I‖e^{irΔ}f‖_q^q dr / ‖f‖^q`.
pub fn strichartz_ratio(f: &ComplexField, q: f64, rule: &WindowRule) -> Result<f64> {
    ratio(f, q, rule, RatioKind::Strichartz)
}
