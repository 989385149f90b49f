//! Quick self-checks against closed forms; a few seconds on the default build.

use std::f64::consts::PI;
use std::time::Instant;

use dmnls::functional::{
    gauss_legendre_rule, gradient_h, hamiltonian, lagrange_multiplier, strichartz_ratio, weinstein_ratio, ModelParams,
};
use dmnls::gaussian_oracle::{gaussian_hamiltonian, sample_gaussian, window_qnorm, GaussianParams};
use dmnls::io_report::{decode_field, encode_field};
use dmnls::profiles::random_smooth;
use dmnls::quadrature::Window;
use dmnls::spectral::{make_grid, propagate, translate, C64};
use dmnls::window::WindowRule;

use crate::config::CliConfig;
use crate::CliError;

struct Check {
    name: &'static str,
    value: f64,
    tol: f64,
}

fn checks() -> Result<Vec<Check>, CliError> {
    let grid = make_grid(128, 32.0)?;
    let mut out = Vec::new();

    let f = random_smooth(&grid, 7, 1.0);
    let u = propagate(&f, 0.37);
    out.push(Check { name: "propagator keeps mass", value: (u.mass() - f.mass()).abs() / f.mass(), tol: 1e-12 });
    let back = propagate(&u, -0.37);
    out.push(Check { name: "propagator inverse", value: back.axpy(-1.0, &f).norm() / f.norm(), tol: 1e-12 });

    let two = propagate(&u, 0.5);
    let once = propagate(&f, 0.87);
    out.push(Check { name: "propagator group law", value: two.axpy(-1.0, &once).norm() / f.norm(), tol: 1e-12 });

    let unit = GaussianParams::bare(1.0)?;
    let closed = window_qnorm(&unit, 4.0, Window::unit())?;
    out.push(Check { name: "quartic window integral", value: (closed - PI / 16.0 * 4f64.atan()).abs(), tol: 1e-12 });

    let g = sample_gaussian(&grid, &unit)?;
    out.push(Check { name: "sampled Gaussian mass", value: (g.mass() - PI / 2.0).abs(), tol: 1e-12 });
    out.push(Check { name: "sampled Gaussian kinetic", value: (g.kinetic() - PI).abs(), tol: 1e-10 });

    let model = ModelParams::new(1.0, 3.0, g.mass())?;
    let rule = gauss_legendre_rule(32, 0.0, 1.0)?;
    let e = hamiltonian(&g, &model, &rule);
    let h = gaussian_hamiltonian(g.mass(), 1.0, 3.0, 1.0);
    out.push(Check { name: "sampled H vs closed form", value: (e.total - h).abs(), tol: 1e-6 });
    out.push(Check { name: "H = 1 - atan4/(16 pi)", value: (gaussian_hamiltonian(1.0, 1.0, 3.0, 1.0) - (1.0 - 4f64.atan() / (16.0 * PI))).abs(), tol: 1e-12 });

    let omega = lagrange_multiplier(&g, &model, &rule)?;
    let proj = -gradient_h(&g, &model, &rule).inner(&g) / g.mass();
    out.push(Check { name: "multiplier identity", value: (omega - proj).abs() / omega.abs().max(1.0), tol: 1e-10 });

    let fm = ModelParams::new(1.0, 3.0, f.mass())?;
    let h0 = hamiltonian(&f, &fm, &rule).total;
    let rot = hamiltonian(&f.scaled(C64::from_polar(1.0, 1.1)), &fm, &rule).total;
    let dx = grid.dx();
    let moved = hamiltonian(&translate(&f, [3.0 * dx, -5.0 * dx]), &fm, &rule).total;
    let inv = ((rot - h0).abs()).max((moved - h0).abs()) / h0.abs();
    out.push(Check { name: "H gauge/translation invariant", value: inv, tol: 1e-10 });

    let small = make_grid(64, 16.0)?;
    let mut worst = 0.0f64;
    for k in 0..3u64 {
        let a = random_smooth(&small, 40 + 2 * k, 1.0);
        let d = random_smooth(&small, 41 + 2 * k, 1.0);
        let pm = ModelParams::new(1.0, 3.0, 1.0)?;
        let an = gradient_h(&a, &pm, &rule).inner(&d);
        let eps = 1e-4;
        let fd = (hamiltonian(&a.axpy(eps, &d), &pm, &rule).total - hamiltonian(&a.axpy(-eps, &d), &pm, &rule).total)
            / (2.0 * eps);
        worst = worst.max((fd - an).abs() / an.abs().max(1e-12));
    }
    out.push(Check { name: "gradient vs central differences", value: worst, tol: 1e-5 });

    let sg = sample_gaussian(&make_grid(128, 30.0)?, &unit)?;
    let global = strichartz_ratio(&sg, 4.0, &WindowRule::new(Window::real(), 32, 1.0)?)?;
    out.push(Check { name: "global (4,4) ratio = 1/4", value: (global - 0.25).abs(), tol: 1e-6 });

    let tau = 2.0f64;
    let dilated = f.relabeled(f.grid().length() / tau.sqrt())?;
    let a = weinstein_ratio(&dilated, 6.0, &WindowRule::new(Window::unit(), 32, 1.0)?)?;
    let b = weinstein_ratio(&f, 6.0, &WindowRule::new(Window::new(0.0, tau)?, 32, tau)?)?;
    out.push(Check { name: "window dilation identity", value: (a - b).abs() / b, tol: 1e-9 });

    let q3 = |s: f64| -> Result<f64, CliError> {
        let gp = GaussianParams::bare(s)?;
        Ok(window_qnorm(&gp, 3.0, Window::unit())? / (gp.kinetic() * gp.mass().sqrt()))
    };
    let growth = q3(100.0)? / q3(1.0)?;
    out.push(Check { name: "q = 3 ratio unbounded (1/growth)", value: 1.0 / growth, tol: 0.2 });

    let bytes = encode_field(&f);
    let same = decode_field(&bytes)?.values() == f.values();
    out.push(Check { name: "field file round trip", value: if same { 0.0 } else { 1.0 }, tol: 0.0 });
    Ok(out)
}

pub fn run(_cfg: &CliConfig) -> Result<bool, CliError> {
    let t = Instant::now();
    let mut ok = true;
    for c in checks()? {
        let pass = c.value <= c.tol;
        ok &= pass;
        println!("{} {:<34} {:.3e} (tol {:.0e})", if pass { "PASS" } else { "FAIL" }, c.name, c.value, c.tol);
    }
    println!("{} in {:.2}s", if ok { "all checks passed" } else { "some checks failed" }, t.elapsed().as_secs_f64());
    Ok(ok)
}
