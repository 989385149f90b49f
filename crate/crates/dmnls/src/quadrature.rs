//! One-dimensional quadrature: Gauss–Legendre rules for the dispersion
//! period and an adaptive Gauss–Kronrod integrator for the analytic oracles.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Time interval `[lo, hi]`; either end may be infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

impl Window {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return invalid(format!("window [{lo}, {hi}] is empty"));
        }
        Ok(Self { lo, hi })
    }

    /// The dispersion period `[0, 1]`.
    pub fn unit() -> Self {
        Self { lo: 0.0, hi: 1.0 }
    }

    /// The whole real line.
    pub fn real() -> Self {
        Self { lo: f64::NEG_INFINITY, hi: f64::INFINITY }
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// `τ·[lo, hi]` for `τ > 0`.
    pub fn scaled(&self, tau: f64) -> Self {
        Self { lo: self.lo * tau, hi: self.hi * tau }
    }

    pub fn shifted(&self, c: f64) -> Self {
        Self { lo: self.lo + c, hi: self.hi + c }
    }

    /// Every endpoint is 0 or infinite, so dilating time leaves the window unchanged.
    pub fn is_scale_free(&self) -> bool {
        [self.lo, self.hi].iter().all(|e| *e == 0.0 || e.is_infinite())
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == Self::real() {
            return write!(f, "R");
        }
        write!(f, "{},{}", self.lo, self.hi)
    }
}

impl FromStr for Window {
    type Err = Error;

    /// Accepts `R`, `real`, or `a,b` where each end may be `inf`/`-inf`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("r") || t.eq_ignore_ascii_case("real") {
            return Ok(Self::real());
        }
        let t = t.trim_start_matches('[').trim_end_matches(']');
        let mut parts = t.split(',');
        let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
            return invalid(format!("window {s:?} should look like `a,b` or `R`"));
        };
        let parse = |x: &str| {
            x.trim().parse::<f64>().map_err(|_| Error::InvalidParam(format!("bad window endpoint {x:?}")))
        };
        Self::new(parse(a)?, parse(b)?)
    }
}

impl Serialize for Window {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Window {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Nodes and weights on a bounded interval.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    pub a: f64,
    pub b: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes increasing.
fn legendre_reference(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // three-term recurrence for P_m(z) and P_m'(z)
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[m - 1 - i] = w[i];
    }
    (x, w)
}

/// Gauss–Legendre rule with `m` nodes on `[a, b]`.
pub fn gauss_legendre_rule(m: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    if m < 2 {
        return invalid(format!("Gauss-Legendre needs m >= 2, got {m}"));
    }
    if !(a.is_finite() && b.is_finite() && a < b) {
        return invalid(format!("quadrature interval [{a}, {b}] must be bounded and nonempty"));
    }
    let (x, w) = legendre_reference(m);
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    Ok(QuadratureRule {
        a,
        b,
        nodes: x.iter().map(|t| c + h * t).collect(),
        weights: w.iter().map(|v| h * v).collect(),
    })
}

impl QuadratureRule {
    /// `m` Gauss–Legendre nodes on each panel between consecutive breakpoints.
    pub fn composite(m: usize, breaks: &[f64]) -> Result<Self> {
        if breaks.len() < 2 || breaks.windows(2).any(|p| p[0] >= p[1]) {
            return invalid("composite rule needs increasing breakpoints");
        }
        let mut rule = QuadratureRule {
            a: breaks[0],
            b: *breaks.last().unwrap(),
            nodes: Vec::new(),
            weights: Vec::new(),
        };
        for p in breaks.windows(2) {
            let panel = gauss_legendre_rule(m, p[0], p[1])?;
            rule.nodes.extend(panel.nodes);
            rule.weights.extend(panel.weights);
        }
        Ok(rule)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// 15-point Kronrod estimate and its difference from the embedded 7-point Gauss rule.
fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let s = f(c - h * XGK[j]) + f(c + h * XGK[j]);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

fn adapt_bounded(f: &impl Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> f64 {
    let mut heap = BinaryHeap::new();
    let (v, e) = gk15(f, a, b);
    heap.push(Piece { a, b, value: v, err: e });
    let (mut total, mut err) = (v, e);
    for _ in 0..2000 {
        if err <= abs_tol.max(rel_tol * total.abs()) {
            break;
        }
        let p = heap.pop().unwrap();
        let m = 0.5 * (p.a + p.b);
        let (v1, e1) = gk15(f, p.a, m);
        let (v2, e2) = gk15(f, m, p.b);
        total += v1 + v2 - p.value;
        err += e1 + e2 - p.err;
        heap.push(Piece { a: p.a, b: m, value: v1, err: e1 });
        heap.push(Piece { a: m, b: p.b, value: v2, err: e2 });
    }
    // re-add to shed the running-sum drift
    heap.iter().map(|p| p.value).sum()
}

/// Adaptive Gauss–Kronrod integral over a possibly unbounded window.
pub fn integrate_adaptive(f: impl Fn(f64) -> f64, w: Window, abs_tol: f64, rel_tol: f64) -> f64 {
    match (w.lo.is_finite(), w.hi.is_finite()) {
        (true, true) => adapt_bounded(&f, w.lo, w.hi, abs_tol, rel_tol),
        (true, false) => {
            let a = w.lo;
            let g = |t: f64| {
                let s = 1.0 - t;
                f(a + t / s) / (s * s)
            };
            adapt_bounded(&g, 0.0, 1.0, abs_tol, rel_tol)
        }
        (false, true) => {
            let b = w.hi;
            let g = |t: f64| {
                let s = 1.0 - t;
                f(b - t / s) / (s * s)
            };
            adapt_bounded(&g, 0.0, 1.0, abs_tol, rel_tol)
        }
        (false, false) => {
            let g = |t: f64| {
                let s = 1.0 - t * t;
                f(t / s) * (1.0 + t * t) / (s * s)
            };
            adapt_bounded(&g, -1.0, 1.0, abs_tol, rel_tol)
        }
    }
}
