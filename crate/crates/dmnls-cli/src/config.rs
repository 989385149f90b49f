//! Flat `key = value` configuration, merged as defaults ← file ← flags.

use std::path::{Path, PathBuf};

use clap::Args;
use dmnls::solve::{Method, SolverOptions};

use crate::CliError;

/// Everything a run needs, fully resolved.
#[derive(Clone, Debug, PartialEq)]
pub struct CliConfig {
    pub n: usize,
    pub length: f64,
    pub m: usize,
    pub dav: f64,
    pub p: f64,
    pub lambda: f64,
    pub seed: u64,
    pub solver: SolverOptions,
    pub out: PathBuf,
    pub threads: usize,
}

impl Default for CliConfig {
    fn default() -> Self {
        Self {
            n: 128,
            length: 64.0,
            m: 32,
            dav: 1.0,
            p: 3.0,
            lambda: 1.0,
            seed: 0,
            solver: SolverOptions::default(),
            out: PathBuf::from("dmnls-out"),
            threads: 0,
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value.trim().parse().map_err(|_| CliError::Usage(format!("bad value {value:?} for {key}")))
}

impl CliConfig {
    /// Apply one `key = value` pair.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let s = &mut self.solver;
        match key.trim() {
            "n" => self.n = parse(key, value)?,
            "length" | "L" => self.length = parse(key, value)?,
            "m" => self.m = parse(key, value)?,
            "dav" | "d_av" => self.dav = parse(key, value)?,
            "p" => self.p = parse(key, value)?,
            "lambda" => self.lambda = parse(key, value)?,
            "seed" => {
                self.seed = parse(key, value)?;
                s.seed = self.seed;
            }
            "max_iters" => s.max_iters = parse(key, value)?,
            "step0" => s.step0 = parse(key, value)?,
            "backtrack" => s.backtrack_factor = parse(key, value)?,
            "grad_tol" => s.grad_tol = parse(key, value)?,
            "energy_floor" => s.energy_floor = parse(key, value)?,
            "spread_tol" => s.spread_tol = parse(key, value)?,
            "init_noise" => s.init_noise = parse(key, value)?,
            "method" => s.method = value.trim().parse::<Method>().map_err(|e| CliError::Usage(e.to_string()))?,
            "out" => self.out = PathBuf::from(value.trim()),
            "threads" => self.threads = parse(key, value)?,
            other => return Err(CliError::Usage(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Read a config file: one `key = value` per line, `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", no + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        self.apply_text(&text)
    }

    /// Render back as a config file; `apply_text(render())` is the identity.
    pub fn render(&self) -> String {
        let s = &self.solver;
        let method = match s.method {
            Method::ConjugateGradient => "cg",
            Method::Steepest => "sd",
        };
        format!(
            "n = {}\nlength = {}\nm = {}\ndav = {}\np = {}\nlambda = {}\nseed = {}\nmax_iters = {}\nstep0 = {}\n\
             backtrack = {}\ngrad_tol = {}\nenergy_floor = {}\nspread_tol = {}\ninit_noise = {}\nmethod = {method}\n\
             out = {}\nthreads = {}\n",
            self.n,
            self.length,
            self.m,
            self.dav,
            self.p,
            self.lambda,
            self.seed,
            s.max_iters,
            s.step0,
            s.backtrack_factor,
            s.grad_tol,
            s.energy_floor,
            s.spread_tol,
            s.init_noise,
            self.out.display(),
            self.threads
        )
    }
}

/// Flags shared by every subcommand; each overrides the matching config key.
#[derive(Args, Clone, Debug, Default)]
pub struct ConfigArgs {
    /// Flat key = value config file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Extra `key=value` overrides, applied after the file.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    pub set: Vec<String>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (0 = automatic); falls back to DMNLS_THREADS.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Grid points per side.
    #[arg(long, short = 'n', global = true)]
    pub n: Option<usize>,
    /// Box side.
    #[arg(long = "length", short = 'L', global = true)]
    pub length: Option<f64>,
    /// Gauss–Legendre nodes on the period.
    #[arg(long, global = true)]
    pub m: Option<usize>,
    #[arg(long, global = true)]
    pub dav: Option<f64>,
    #[arg(long, global = true)]
    pub p: Option<f64>,
    #[arg(long, global = true)]
    pub lambda: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub max_iters: Option<usize>,
    #[arg(long, global = true)]
    pub grad_tol: Option<f64>,
    /// cg or sd.
    #[arg(long, global = true)]
    pub method: Option<String>,
}

impl ConfigArgs {
    pub fn resolve(&self) -> Result<CliConfig, CliError> {
        let mut cfg = CliConfig::default();
        if let Ok(t) = std::env::var("DMNLS_THREADS") {
            cfg.set("threads", &t)?;
        }
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        for kv in &self.set {
            let (k, v) = kv.split_once('=').ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got {kv:?}")))?;
            cfg.set(k, v)?;
        }
        let pairs: [(&str, Option<String>); 12] = [
            ("out", self.out.as_ref().map(|p| p.display().to_string())),
            ("threads", self.threads.map(|v| v.to_string())),
            ("n", self.n.map(|v| v.to_string())),
            ("length", self.length.map(|v| v.to_string())),
            ("m", self.m.map(|v| v.to_string())),
            ("dav", self.dav.map(|v| v.to_string())),
            ("p", self.p.map(|v| v.to_string())),
            ("lambda", self.lambda.map(|v| v.to_string())),
            ("seed", self.seed.map(|v| v.to_string())),
            ("max_iters", self.max_iters.map(|v| v.to_string())),
            ("grad_tol", self.grad_tol.map(|v| v.to_string())),
            ("method", self.method.clone()),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                cfg.set(k, &v)?;
            }
        }
        cfg.solver.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(cfg)
    }
}
