//! The threshold mass `λ_cr = inf{λ : E_λ < 0}`: energy-sign bisection,
//! the best-constant formula, and the scans that witness `E_λ = −∞`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::functional::{gauss_legendre_rule, ModelParams};
use crate::gaussian_oracle::{gaussian_hamiltonian, window_qnorm, GaussianParams};
use crate::quadrature::Window;
use crate::solve::{initial_guess, minimize_at_mass, InitRule, MinimizeReport, SolverOptions, Status};
use crate::spectral::{make_grid, ComplexField};
use crate::window::{WindowRule, DEFAULT_T0};

/// `λ_cr = (d_av(p+1)/(2C_p))^{2/(p−1)}`, valid for `3 ≤ p ≤ 5`.
pub fn lambda_cr_from_constant(p: f64, dav: f64, cp: f64) -> Result<f64> {
    if !(3.0..=5.0).contains(&p) {
        return invalid(format!("the best-constant formula needs 3 <= p <= 5, got {p}"));
    }
    if !(dav > 0.0 && cp > 0.0) {
        return invalid("d_av and the constant must be positive");
    }
    Ok((dav * (p + 1.0) / (2.0 * cp)).powf(2.0 / (p - 1.0)))
}

/// Grid, quadrature and initialization shared by every solve in a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n: usize,
    pub length: f64,
    pub m: usize,
    pub init: InitRule,
    /// Energy below `-eps_e` counts as negative.
    pub eps_e: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { n: 128, length: 64.0, m: 32, init: InitRule::Auto, eps_e: 1e-5 }
    }
}

/// One solved mass.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergySample {
    pub lambda: f64,
    /// Estimate of `E_λ`: the final `H`, capped at 0 since `E_λ ≤ 0` always.
    pub energy: f64,
    /// `H` of the last iterate.
    pub final_h: f64,
    pub omega: f64,
    pub status: Status,
    pub negative: bool,
}

impl EnergySample {
    fn from_report(lambda: f64, rep: &MinimizeReport, eps_e: f64) -> Self {
        Self {
            lambda,
            energy: rep.energy.total.min(0.0),
            final_h: rep.energy.total,
            omega: rep.omega,
            status: rep.status,
            negative: rep.is_negative(eps_e),
        }
    }

    pub fn label(&self) -> &'static str {
        if self.negative {
            "negative-energy"
        } else {
            "zero-energy"
        }
    }
}

/// Minimize at one mass with the sweep's grid and initial guess.
pub fn solve_at(p: f64, dav: f64, lambda: f64, opts: &SolverOptions, cfg: &SweepConfig) -> Result<MinimizeReport> {
    let params = ModelParams::new(dav, p, lambda)?;
    let grid = make_grid(cfg.n, cfg.length)?;
    let rule = gauss_legendre_rule(cfg.m, 0.0, 1.0)?;
    let (init, _) = initial_guess(&grid, &params, cfg.init)?;
    minimize_at_mass(&params, &init, opts, &rule)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub p: f64,
    pub dav: f64,
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    pub lambda_cr_bisect: f64,
    /// Upper bound from the formula (an ascent constant is a lower bound on `C_p`).
    pub lambda_cr_formula: Option<f64>,
    pub cp_estimate: Option<f64>,
    pub samples: Vec<EnergySample>,
}

/// Bisection on "the minimizer finds `H < −ε_E` on a localized state".
pub fn bisect_threshold(
    p: f64,
    dav: f64,
    bracket: (f64, f64),
    tol: f64,
    cp: Option<f64>,
    opts: &SolverOptions,
    cfg: &SweepConfig,
) -> Result<ThresholdReport> {
    if !(3.0..5.0).contains(&p) {
        return invalid(format!("bisection needs 3 <= p < 5, got {p}"));
    }
    let (mut lo, mut hi) = bracket;
    if !(0.0 < lo && lo < hi && tol > 0.0) {
        return invalid("need 0 < lambda_lo < lambda_hi and tol > 0");
    }
    let mut samples = Vec::new();
    let mut probe = |lambda: f64| -> Result<bool> {
        let rep = solve_at(p, dav, lambda, opts, cfg)?;
        let s = EnergySample::from_report(lambda, &rep, cfg.eps_e);
        let neg = s.negative;
        samples.push(s);
        Ok(neg)
    };
    if probe(lo)? {
        return Err(Error::BadBracket { lo, hi, reason: "lower end already has negative energy".into() });
    }
    if !probe(hi)? {
        return Err(Error::BadBracket { lo, hi, reason: "upper end has no negative-energy state".into() });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if probe(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    samples.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    let lambda_cr_formula = cp.map(|c| lambda_cr_from_constant(p, dav, c)).transpose()?;
    Ok(ThresholdReport {
        p,
        dav,
        lambda_lo: lo,
        lambda_hi: hi,
        lambda_cr_bisect: 0.5 * (lo + hi),
        lambda_cr_formula,
        cp_estimate: cp,
        samples,
    })
}

/// `Ê_λ` along a list of masses, for `1 < p < 5`.
pub fn energy_curve(
    p: f64,
    dav: f64,
    lambdas: &[f64],
    opts: &SolverOptions,
    cfg: &SweepConfig,
) -> Result<Vec<EnergySample>> {
    if !(p > 1.0 && p < 5.0) {
        return invalid(format!("energy curve needs 1 < p < 5, got {p}"));
    }
    lambdas
        .iter()
        .map(|&l| solve_at(p, dav, l, opts, cfg).map(|r| EnergySample::from_report(l, &r, cfg.eps_e)))
        .collect()
}

/// Profile used by [`critical_scan`].
#[derive(Clone, Debug)]
pub enum ScanProfile<'a> {
    Field(&'a ComplexField),
    /// The unit-width Gaussian, with closed-form window integrals.
    GaussianSurrogate,
}

/// `H(Q̃_β)` for `Q̃_β = μ e^{−(i/2)Δ} Q(√2β·)` with `‖Q̃_β‖² = λ` and `p = 5`.
///
/// With `τ = 2β²` and `μ² = λτ/‖Q‖²` the dilation identity gives
/// `H = (d_av/2)μ²‖∇Q‖² − (1/6)μ⁶τ⁻² ∫_{−β²}^{β²}‖e^{rΔ}Q‖₆⁶ dr`, so no grid
/// at the (huge) scaled resolution is needed.
pub fn critical_scan(
    dav: f64,
    lambda: f64,
    betas: &[f64],
    profile: Option<ScanProfile<'_>>,
    m: usize,
) -> Result<Vec<(f64, f64)>> {
    let profile = profile.ok_or(Error::MissingProfile)?;
    if !(dav > 0.0 && lambda > 0.0) {
        return invalid("d_av and lambda must be positive");
    }
    let (mass, kin) = match &profile {
        ScanProfile::Field(q) => (q.mass(), q.kinetic()),
        ScanProfile::GaussianSurrogate => {
            let g = GaussianParams::bare(1.0)?;
            (g.mass(), g.kinetic())
        }
    };
    if mass == 0.0 {
        return Err(Error::ZeroMass);
    }
    betas
        .iter()
        .map(|&beta| {
            if !(beta > 0.0) {
                return invalid(format!("beta = {beta} must be positive"));
            }
            let w = Window::new(-beta * beta, beta * beta)?;
            let n6 = match &profile {
                ScanProfile::Field(q) => WindowRule::new(w, m, DEFAULT_T0)?.integral(q, 6.0)?,
                ScanProfile::GaussianSurrogate => window_qnorm(&GaussianParams::bare(1.0)?, 6.0, w)?,
            };
            let tau = 2.0 * beta * beta;
            let mu2 = lambda * tau / mass;
            Ok((beta, 0.5 * dav * mu2 * kin - mu2.powi(3) * n6 / (6.0 * tau * tau)))
        })
        .collect()
}

/// Closed-form energy of mass-`λ` Gaussians along `σ₀`, for `p > 5`.
pub fn supercritical_gaussian_scan(p: f64, lambda: f64, dav: f64, sigmas: &[f64]) -> Result<Vec<(f64, f64)>> {
    if !(p > 5.0) {
        return invalid(format!("supercritical scan needs p > 5, got {p}"));
    }
    if !(lambda > 0.0 && dav > 0.0) || sigmas.iter().any(|s| !(*s > 0.0)) {
        return invalid("lambda, d_av and every sigma0 must be positive");
    }
    Ok(sigmas.iter().map(|&s| (s, gaussian_hamiltonian(lambda, s, p, dav))).collect())
}
