use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::Args;
use dmnls::functional::{gauss_legendre_rule, hamiltonian, ModelParams, RatioKind};
use dmnls::gaussian_oracle::{chirped_gaussian_hamiltonian, gaussian_hamiltonian, window_qnorm, GaussianParams};
use dmnls::io_report::{emit_report, read_field, write_field, Provenance, ReportFormat, RunParams, RunRecord, RunResults, Series};
use dmnls::profiles::chirped_gaussian;
use dmnls::quadrature::Window;
use dmnls::solve::{initial_guess, maximize_weinstein, minimize_at_mass, AscentSetup, InitRule};
use dmnls::spectral::{make_grid, ComplexField};
use dmnls::threshold::{
    bisect_threshold, critical_scan as scan_beta, lambda_cr_from_constant, supercritical_gaussian_scan, ScanProfile,
    SweepConfig,
};

use crate::config::CliConfig;
use crate::CliError;

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

fn parse_list(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("bad number {x:?} in list"))))
        .collect()
}

/// `sigma0=1,focus=0.5` (either key optional).
fn parse_gaussian(spec: &str) -> Result<(f64, f64), CliError> {
    let (mut sigma0, mut focus) = (1.0, 0.0);
    for part in spec.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| CliError::Usage(format!("expected key=value in {spec:?}")))?;
        let v: f64 = v.trim().parse().map_err(|_| CliError::Usage(format!("bad value in {spec:?}")))?;
        match k.trim() {
            "sigma0" => sigma0 = v,
            "focus" => focus = v,
            other => return usage(format!("unknown Gaussian key {other:?}")),
        }
    }
    Ok((sigma0, focus))
}

fn parse_init(spec: &str) -> Result<InitRule, CliError> {
    Ok(match spec {
        "auto" => InitRule::Auto,
        "lambda-width" => InitRule::LambdaWidth,
        "best" | "best-gaussian" => InitRule::BestGaussian,
        s => match s.strip_prefix("gaussian:") {
            Some(rest) => {
                let (sigma0, focus) = parse_gaussian(rest)?;
                InitRule::Gaussian { sigma0, focus }
            }
            None => return usage(format!("unknown init {s:?} (auto, lambda-width, best, gaussian:sigma0=..,focus=..)")),
        },
    })
}

fn parse_window(s: &str) -> Result<Window, CliError> {
    s.parse().map_err(|e: dmnls::Error| CliError::Usage(e.to_string()))
}

fn params_of(cfg: &CliConfig) -> RunParams {
    RunParams {
        dav: Some(cfg.dav),
        p: Some(cfg.p),
        lambda: Some(cfg.lambda),
        n: Some(cfg.n),
        length: Some(cfg.length),
        m: Some(cfg.m),
        seed: Some(cfg.seed),
    }
}

fn provenance() -> Provenance {
    let revision = std::env::var("DMNLS_REVISION").unwrap_or_else(|_| concat!("v", env!("CARGO_PKG_VERSION")).into());
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    Provenance { revision, timestamp }
}

/// Write `<name>.json`, the resolved `<name>.cfg`, `<name>.csv` (when there are series) and any fields under the output directory.
fn save(
    cfg: &CliConfig,
    name: &str,
    params: RunParams,
    mut results: RunResults,
    started: Instant,
    fields: &[(&str, &ComplexField)],
) -> Result<(), CliError> {
    results.timings.insert("total_seconds".into(), started.elapsed().as_secs_f64());
    let record = RunRecord::new(name, params, results, provenance());
    std::fs::create_dir_all(&cfg.out)?;
    std::fs::write(cfg.out.join(format!("{name}.cfg")), cfg.render())?;
    std::fs::write(cfg.out.join(format!("{name}.json")), emit_report(&record, ReportFormat::Json))?;
    if !record.results.series.is_empty() {
        std::fs::write(cfg.out.join(format!("{name}.csv")), emit_report(&record, ReportFormat::CsvSeries))?;
    }
    for (file, f) in fields {
        write_field(f, cfg.out.join(file))?;
    }
    println!("wrote {}", cfg.out.join(format!("{name}.json")).display());
    Ok(())
}

#[derive(Args, Debug)]
pub struct EnergyArgs {
    /// Field file to evaluate (its mass replaces lambda).
    #[arg(long, conflicts_with = "gaussian")]
    pub field: Option<PathBuf>,
    /// Mass-lambda Gaussian on the configured grid, e.g. `sigma0=1,focus=0`.
    #[arg(long)]
    pub gaussian: Option<String>,
}

pub fn energy(cfg: &CliConfig, a: &EnergyArgs) -> Result<bool, CliError> {
    let t = Instant::now();
    let mut results = RunResults::default();
    let mut params = params_of(cfg);
    let (f, model) = match (&a.field, &a.gaussian) {
        (Some(path), _) => {
            let f = read_field(path)?;
            let model = ModelParams::new(cfg.dav, cfg.p, f.mass())?;
            params.n = Some(f.grid().n());
            params.length = Some(f.grid().length());
            (f, model)
        }
        (None, Some(spec)) => {
            let (sigma0, focus) = parse_gaussian(spec)?;
            let model = ModelParams::new(cfg.dav, cfg.p, cfg.lambda)?;
            let grid = make_grid(cfg.n, cfg.length)?;
            let closed = chirped_gaussian_hamiltonian(cfg.lambda, sigma0, focus, cfg.p, cfg.dav)?;
            results.scalars.insert("closed_form_total".into(), closed);
            println!("closed form = {closed:.10}");
            (chirped_gaussian(&grid, cfg.lambda, sigma0, focus)?, model)
        }
        (None, None) => return usage("energy needs --field or --gaussian"),
    };
    let rule = gauss_legendre_rule(cfg.m, 0.0, 1.0)?;
    let e = hamiltonian(&f, &model, &rule);
    println!("kinetic = {:.10}\npotential = {:.10}\ntotal = {:.10}\nmass = {:.10}", e.kinetic, e.potential, e.total, e.mass);
    params.lambda = Some(model.lambda);
    results.energy = Some(e);
    save(cfg, "energy", params, results, t, &[])?;
    Ok(true)
}

#[derive(Args, Debug)]
pub struct MinimizeArgs {
    /// auto, lambda-width, best, or gaussian:sigma0=..,focus=..
    #[arg(long, default_value = "auto")]
    pub init: String,
    /// Start from a field file instead (rescaled to mass lambda).
    #[arg(long)]
    pub from: Option<PathBuf>,
}

pub fn minimize(cfg: &CliConfig, a: &MinimizeArgs) -> Result<bool, CliError> {
    let t = Instant::now();
    let model = ModelParams::new(cfg.dav, cfg.p, cfg.lambda)?;
    let init = match &a.from {
        Some(path) => read_field(path)?,
        None => {
            let grid = make_grid(cfg.n, cfg.length)?;
            let (f, choice) = initial_guess(&grid, &model, parse_init(&a.init)?)?;
            println!("init: sigma0 = {:.4}, focus = {}, closed-form H = {:.6e}", choice.sigma0, choice.focus, choice.predicted_energy);
            f
        }
    };
    let rule = gauss_legendre_rule(cfg.m, 0.0, 1.0)?;
    let rep = minimize_at_mass(&model, &init, &cfg.solver, &rule)?;
    println!(
        "status = {}\niterations = {}\ntotal = {:.10}\nomega = {:.10}\nresidual = {:.3e}\ntail = {:.3e}",
        rep.status, rep.iterations, rep.energy.total, rep.omega, rep.el_residual, rep.tail_fraction
    );
    let mut results = RunResults {
        energy: Some(rep.energy),
        omega: Some(rep.omega),
        residual: Some(rep.el_residual),
        status: Some(rep.status.to_string()),
        iterations: Some(rep.iterations),
        ..Default::default()
    };
    results.scalars.insert("tail_fraction".into(), rep.tail_fraction);
    if let Some(k) = rep.floor_crossing {
        results.scalars.insert("floor_crossing_step".into(), k as f64);
    }
    let hist = rep.history.iter().enumerate().map(|(k, h)| (k as f64, *h)).collect();
    results.series.push(Series::new("step", "energy", hist));
    save(cfg, "minimize", params_of(cfg), results, t, &[("ground_state.dmf", &rep.final_field)])?;
    Ok(true)
}

#[derive(Args, Debug)]
pub struct WeinsteinArgs {
    /// Exponent; defaults to p + 1.
    #[arg(long)]
    pub q: Option<f64>,
    /// Time window: `R` or `a,b`.
    #[arg(long, default_value = "0,1")]
    pub window: String,
    /// gn (‖∇f‖²‖f‖^{q−2}) or strichartz (‖f‖^q).
    #[arg(long, default_value = "gn")]
    pub kind: String,
    /// Initial Gaussian `sigma0=..,focus=..` (focus chirps it).
    #[arg(long, default_value = "sigma0=1,focus=0")]
    pub init: String,
    /// Start from a field file instead.
    #[arg(long)]
    pub from: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-3)]
    pub tau_min: f64,
    #[arg(long, default_value_t = 1e3)]
    pub tau_max: f64,
}

pub fn weinstein(cfg: &CliConfig, a: &WeinsteinArgs) -> Result<bool, CliError> {
    let t = Instant::now();
    let q = a.q.unwrap_or(cfg.p + 1.0);
    let window = parse_window(&a.window)?;
    let kind: RatioKind = a.kind.parse()?;
    let init = match &a.from {
        Some(path) => read_field(path)?,
        None => {
            let (sigma0, focus) = parse_gaussian(&a.init)?;
            chirped_gaussian(&make_grid(cfg.n, cfg.length)?, 1.0, sigma0, focus)?
        }
    };
    let setup = AscentSetup { kind, m: cfg.m, tau_min: a.tau_min, tau_max: a.tau_max, ..Default::default() };
    let rep = maximize_weinstein(q, window, &init, &cfg.solver, &setup)?;
    println!(
        "ratio = {:.10}\nstatus = {}\niterations = {}\ndilation = {:.4e}{}",
        rep.ratio,
        rep.status,
        rep.iterations,
        rep.dilation,
        rep.dilation_at_bound.map_or(String::new(), |b| format!(" (pinned at {b})"))
    );
    let mut results = RunResults {
        status: Some(rep.status.to_string()),
        iterations: Some(rep.iterations),
        ..Default::default()
    };
    results.scalars.insert("ratio".into(), rep.ratio);
    results.scalars.insert("q".into(), q);
    results.scalars.insert("dilation".into(), rep.dilation);
    if (3.0..=5.0).contains(&(q - 1.0)) && window == Window::unit() && kind == RatioKind::GagliardoNirenberg {
        let lam = lambda_cr_from_constant(q - 1.0, cfg.dav, rep.ratio)?;
        println!("lambda_cr (formula) = {lam:.6}");
        results.scalars.insert("lambda_cr_formula".into(), lam);
    }
    let hist = rep.history.iter().enumerate().map(|(k, r)| (k as f64, *r)).collect();
    results.series.push(Series::new("step", "ratio", hist));
    save(cfg, "weinstein", params_of(cfg), results, t, &[("maximizer.dmf", &rep.final_field)])?;
    Ok(true)
}

#[derive(Args, Debug)]
pub struct ThresholdArgs {
    #[arg(long)]
    pub lo: f64,
    #[arg(long)]
    pub hi: f64,
    #[arg(long, default_value_t = 0.05)]
    pub tol: f64,
    /// Best constant for the formula; computed by a [0,1] ascent when absent.
    #[arg(long)]
    pub cp: Option<f64>,
    /// Skip the formula cross-check.
    #[arg(long)]
    pub no_formula: bool,
    #[arg(long, default_value = "auto")]
    pub init: String,
}

fn ascent_constant(cfg: &CliConfig, p: f64) -> Result<f64, CliError> {
    // a modest grid suffices: the dilation variable carries the scale
    let grid = make_grid(64, 16.0)?;
    let focus = if p >= 5.0 { 0.5 } else { 0.0 };
    let init = chirped_gaussian(&grid, 1.0, 1.0, focus)?;
    let opts = dmnls::solve::SolverOptions { max_iters: cfg.solver.max_iters.max(400), grad_tol: 1e-8, ..cfg.solver.clone() };
    let rep = maximize_weinstein(p + 1.0, Window::unit(), &init, &opts, &AscentSetup { m: cfg.m, ..Default::default() })?;
    println!("ascent constant C_p = {:.8} ({}, {} steps)", rep.ratio, rep.status, rep.iterations);
    Ok(rep.ratio)
}

pub fn threshold(cfg: &CliConfig, a: &ThresholdArgs) -> Result<bool, CliError> {
    let t = Instant::now();
    let cp = match (a.cp, a.no_formula) {
        (Some(c), _) => Some(c),
        (None, true) => None,
        (None, false) => Some(ascent_constant(cfg, cfg.p)?),
    };
    let sweep = SweepConfig { n: cfg.n, length: cfg.length, m: cfg.m, init: parse_init(&a.init)?, ..Default::default() };
    let rep = bisect_threshold(cfg.p, cfg.dav, (a.lo, a.hi), a.tol, cp, &cfg.solver, &sweep)?;
    for s in &rep.samples {
        println!("  lambda {:.5}: {} (H = {:.3e}, {})", s.lambda, s.label(), s.final_h, s.status);
    }
    println!("lambda_cr (bisection) = {:.6} in [{:.6}, {:.6}]", rep.lambda_cr_bisect, rep.lambda_lo, rep.lambda_hi);
    let mut results = RunResults::default();
    results.scalars.insert("lambda_cr_bisect".into(), rep.lambda_cr_bisect);
    results.scalars.insert("lambda_lo".into(), rep.lambda_lo);
    results.scalars.insert("lambda_hi".into(), rep.lambda_hi);
    if let (Some(f), Some(c)) = (rep.lambda_cr_formula, rep.cp_estimate) {
        let rel = (rep.lambda_cr_bisect - f).abs() / f;
        println!("lambda_cr (formula) = {f:.6}, relative difference {:.2}%", 100.0 * rel);
        results.scalars.insert("lambda_cr_formula".into(), f);
        results.scalars.insert("cp_estimate".into(), c);
        results.scalars.insert("relative_difference".into(), rel);
    }
    let pts = rep.samples.iter().map(|s| (s.lambda, s.energy)).collect();
    results.series.push(Series::new("lambda", "energy", pts));
    save(cfg, "threshold", params_of(cfg), results, t, &[])?;
    Ok(true)
}

#[derive(Args, Debug)]
pub struct CriticalArgs {
    #[arg(long, default_value = "0.25,0.5,1,2,4,8")]
    pub betas: String,
    /// Profile Q (field file), e.g. a global maximizer from `weinstein --window R --q 6`.
    #[arg(long, conflicts_with = "gaussian_surrogate")]
    pub profile: Option<PathBuf>,
    /// Use the unit Gaussian as the profile.
    #[arg(long)]
    pub gaussian_surrogate: bool,
    /// Scan at factor · sqrt(3 d_av / cp) instead of the configured lambda.
    #[arg(long, requires = "cp")]
    pub factor: Option<f64>,
    #[arg(long)]
    pub cp: Option<f64>,
}

pub fn critical_scan(cfg: &CliConfig, a: &CriticalArgs) -> Result<bool, CliError> {
    let t = Instant::now();
    let betas = parse_list(&a.betas)?;
    let lambda = match (a.factor, a.cp) {
        (Some(f), Some(c)) => f * lambda_cr_from_constant(5.0, cfg.dav, c)?,
        _ => cfg.lambda,
    };
    let field = a.profile.as_ref().map(read_field).transpose()?;
    let profile = match (&field, a.gaussian_surrogate) {
        (Some(f), _) => Some(ScanProfile::Field(f)),
        (None, true) => Some(ScanProfile::GaussianSurrogate),
        (None, false) => None,
    };
    let pts = scan_beta(cfg.dav, lambda, &betas, profile, cfg.m)?;
    println!("lambda = {lambda:.6}");
    for (b, h) in &pts {
        println!("  beta {b:>8.4}: H = {h:.6e}");
    }
    let mut params = params_of(cfg);
    params.p = Some(5.0);
    params.lambda = Some(lambda);
    let results = RunResults { series: vec![Series::new("beta", "energy", pts)], ..Default::default() };
    save(cfg, "critical-scan", params, results, t, &[])?;
    Ok(true)
}

#[derive(Args, Debug)]
pub struct SupercriticalArgs {
    #[arg(long, default_value = "1,0.1,0.01,1e-3,1e-4,1e-5,1e-6,1e-7")]
    pub sigmas: String,
}

pub fn supercritical_scan(cfg: &CliConfig, a: &SupercriticalArgs) -> Result<bool, CliError> {
    let t = Instant::now();
    let pts = supercritical_gaussian_scan(cfg.p, cfg.lambda, cfg.dav, &parse_list(&a.sigmas)?)?;
    for (s, h) in &pts {
        println!("  sigma0 {s:>10.3e}: H = {h:.6e}");
    }
    let results = RunResults { series: vec![Series::new("sigma0", "energy", pts)], ..Default::default() };
    save(cfg, "supercritical-scan", params_of(cfg), results, t, &[])?;
    Ok(true)
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 1.0)]
    pub sigma0: f64,
    #[arg(long, default_value_t = 4.0)]
    pub q: f64,
    #[arg(long, default_value_t = 1.0)]
    pub amplitude: f64,
    #[arg(long, default_value = "0,1")]
    pub window: String,
}

pub fn oracle(cfg: &CliConfig, a: &OracleArgs) -> Result<bool, CliError> {
    let t = Instant::now();
    let gp = GaussianParams::new(a.sigma0, a.amplitude)?;
    let w = parse_window(&a.window)?;
    let v = window_qnorm(&gp, a.q, w)?;
    let h = gaussian_hamiltonian(cfg.lambda, a.sigma0, cfg.p, cfg.dav);
    println!("{v:.10}");
    println!("window integral q = {} on {w}: {v:.12}", a.q);
    println!("mass = {:.12}\nkinetic = {:.12}", gp.mass(), gp.kinetic());
    println!("H(lambda = {}, p = {}, d_av = {}) = {h:.12}", cfg.lambda, cfg.p, cfg.dav);
    let mut scalars = BTreeMap::new();
    scalars.insert("window_qnorm".into(), v);
    scalars.insert("mass".into(), gp.mass());
    scalars.insert("kinetic".into(), gp.kinetic());
    scalars.insert("gaussian_hamiltonian".into(), h);
    save(cfg, "oracle", params_of(cfg), RunResults { scalars, ..Default::default() }, t, &[])?;
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argument_parsers() {
        assert_eq!(parse_gaussian("sigma0=2,focus=0.5").unwrap(), (2.0, 0.5));
        assert_eq!(parse_gaussian("").unwrap(), (1.0, 0.0));
        assert!(parse_gaussian("width=2").is_err());
        assert_eq!(parse_init("gaussian:sigma0=3").unwrap(), InitRule::Gaussian { sigma0: 3.0, focus: 0.0 });
        assert!(parse_init("sech").is_err());
        assert_eq!(parse_list("1, 2.5,1e-3").unwrap(), vec![1.0, 2.5, 1e-3]);
        assert!(parse_list("1,,2").is_err());
    }
}
