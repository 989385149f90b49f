//! Periodic pseudo-spectral discretization of the plane.
//!
//! Layout: `values[i * n + j]` holds the sample at `(x_i, x_j)` with
//! `x_i = -L/2 + i·dx`. The DFT is unnormalized forward and scaled by `1/n²`
//! on the way back; every physical integral carries its own `dx²`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Square periodic box `[-L/2, L/2)²` with `n` points per axis.
pub struct SpectralGrid {
    n: usize,
    length: f64,
    dx: f64,
    wavenumbers: Vec<f64>,
    k2: Vec<f64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

/// Grids are shared between many fields.
pub type Grid = Arc<SpectralGrid>;

impl fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralGrid")
            .field("n", &self.n)
            .field("length", &self.length)
            .field("dx", &self.dx)
            .finish()
    }
}

impl PartialEq for SpectralGrid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.length.to_bits() == other.length.to_bits()
    }
}

/// Build a grid. `n` must be a power of two and at least 8.
pub fn make_grid(n: usize, length: f64) -> Result<Grid> {
    if n < 8 || !n.is_power_of_two() {
        return Err(Error::InvalidGrid(format!("n = {n} is not a power of two >= 8")));
    }
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::InvalidGrid(format!("length = {length} must be positive")));
    }
    let dk = 2.0 * std::f64::consts::PI / length;
    let wavenumbers: Vec<f64> = (0..n)
        .map(|j| {
            let m = if j < n / 2 { j as isize } else { j as isize - n as isize };
            m as f64 * dk
        })
        .collect();
    let mut k2 = Vec::with_capacity(n * n);
    for &kx in &wavenumbers {
        for &ky in &wavenumbers {
            k2.push(kx * kx + ky * ky);
        }
    }
    let mut planner = FftPlanner::new();
    Ok(Arc::new(SpectralGrid {
        n,
        length,
        dx: length / n as f64,
        wavenumbers,
        k2,
        fwd: planner.plan_fft_forward(n),
        inv: planner.plan_fft_inverse(n),
    }))
}

impl SpectralGrid {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Per-axis wavenumbers in DFT order.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    /// `|k|²` for every mode, same layout as the field.
    pub fn k2(&self) -> &[f64] {
        &self.k2
    }

    /// Coordinate of index `i` along either axis.
    pub fn coord(&self, i: usize) -> f64 {
        -0.5 * self.length + i as f64 * self.dx
    }

    pub fn cell_area(&self) -> f64 {
        self.dx * self.dx
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Same point count on a box of a different side. Relabelling the samples
    /// of `f` onto it realizes the dilation `x ↦ f(x · L/L')`.
    pub fn with_length(&self, length: f64) -> Result<Grid> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!("length = {length} must be positive")));
        }
        let c = self.length / length;
        Ok(Arc::new(SpectralGrid {
            n: self.n,
            length,
            dx: length / self.n as f64,
            wavenumbers: self.wavenumbers.iter().map(|k| k * c).collect(),
            k2: self.k2.iter().map(|k| k * c * c).collect(),
            fwd: Arc::clone(&self.fwd),
            inv: Arc::clone(&self.inv),
        }))
    }

    /// Forward 2D DFT in place (unnormalized).
    pub fn fft2(&self, data: &mut [C64]) {
        self.run(&self.fwd, data);
    }

    /// Inverse 2D DFT in place, scaled by `1/n²`.
    pub fn ifft2(&self, data: &mut [C64]) {
        self.run(&self.inv, data);
        let s = 1.0 / (self.n * self.n) as f64;
        data.iter_mut().for_each(|z| *z *= s);
    }

    /// Inverse 2D DFT without the `1/n²` factor.
    pub(crate) fn ifft2_unscaled(&self, data: &mut [C64]) {
        self.run(&self.inv, data);
    }

    fn run(&self, plan: &Arc<dyn Fft<f64>>, data: &mut [C64]) {
        debug_assert_eq!(data.len(), self.n * self.n);
        let mut scratch = vec![C64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        plan.process_with_scratch(data, &mut scratch);
        transpose(data, self.n);
        plan.process_with_scratch(data, &mut scratch);
        transpose(data, self.n);
    }
}

fn transpose(data: &mut [C64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}

/// Complex samples on a grid. Entries are finite.
#[derive(Clone)]
pub struct ComplexField {
    grid: Grid,
    values: Vec<C64>,
}

impl fmt::Debug for ComplexField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ComplexField")
            .field("grid", &self.grid)
            .field("mass", &self.mass())
            .finish()
    }
}

fn check_finite(n: usize, values: &[C64]) -> Result<()> {
    match values.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
        Some(idx) => Err(Error::NonFinite { row: idx / n, col: idx % n }),
        None => Ok(()),
    }
}

impl ComplexField {
    pub fn zeros(grid: &Grid) -> Self {
        Self { grid: grid.clone(), values: vec![C64::new(0.0, 0.0); grid.len()] }
    }

    pub fn from_values(grid: &Grid, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::ShapeMismatch { expected: grid.len(), found: values.len() });
        }
        check_finite(grid.n, &values)?;
        Ok(Self { grid: grid.clone(), values })
    }

    /// Field whose DFT is `spectrum`.
    pub fn from_spectrum(grid: &Grid, mut spectrum: Vec<C64>) -> Result<Self> {
        if spectrum.len() != grid.len() {
            return Err(Error::ShapeMismatch { expected: grid.len(), found: spectrum.len() });
        }
        grid.ifft2(&mut spectrum);
        Self::from_values(grid, spectrum)
    }

    /// Crate-internal constructor; callers guarantee finiteness.
    pub(crate) fn raw(grid: &Grid, values: Vec<C64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid: grid.clone(), values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    pub fn is_finite(&self) -> bool {
        check_finite(self.grid.n, &self.values).is_ok()
    }

    pub fn same_grid(&self, other: &ComplexField) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid
    }

    /// Forward DFT (unnormalized).
    pub fn spectrum(&self) -> Vec<C64> {
        let mut s = self.values.clone();
        self.grid.fft2(&mut s);
        s
    }

    pub fn scaled(&self, c: C64) -> Self {
        Self::raw(&self.grid, self.values.iter().map(|z| z * c).collect())
    }

    pub fn scaled_re(&self, c: f64) -> Self {
        Self::raw(&self.grid, self.values.iter().map(|z| z * c).collect())
    }

    /// `self + a·other`.
    pub fn axpy(&self, a: f64, other: &ComplexField) -> Self {
        assert!(self.same_grid(other), "axpy across grids");
        Self::raw(
            &self.grid,
            self.values.iter().zip(&other.values).map(|(x, y)| x + y * a).collect(),
        )
    }

    pub(crate) fn axpy_in_place(&mut self, a: f64, other: &ComplexField) {
        for (x, y) in self.values.iter_mut().zip(&other.values) {
            *x += y * a;
        }
    }

    /// Real L² pairing `Re ∫ f ḡ`.
    pub fn inner(&self, other: &ComplexField) -> f64 {
        assert!(self.same_grid(other), "inner product across grids");
        let partial: Vec<f64> = self
            .values
            .chunks(self.grid.n)
            .zip(other.values.chunks(self.grid.n))
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.re * y.re + x.im * y.im).sum())
            .collect();
        crate::par::pairwise_sum(&partial) * self.grid.cell_area()
    }

    pub fn norm(&self) -> f64 {
        self.mass().sqrt()
    }

    /// `‖f‖²`.
    pub fn mass(&self) -> f64 {
        let partial: Vec<f64> =
            self.values.chunks(self.grid.n).map(|row| row.iter().map(|z| z.norm_sqr()).sum()).collect();
        crate::par::pairwise_sum(&partial) * self.grid.cell_area()
    }

    /// `‖∇f‖²`.
    pub fn kinetic(&self) -> f64 {
        kinetic_from_spectrum(&self.grid, &self.spectrum())
    }

    /// Value at the grid origin `(n/2, n/2)`.
    pub fn at_origin(&self) -> C64 {
        let h = self.grid.n / 2;
        self.values[h * self.grid.n + h]
    }

    /// Same samples placed on a box of side `length` (a dilation of the profile).
    pub fn relabeled(&self, length: f64) -> Result<Self> {
        let grid = self.grid.with_length(length)?;
        Ok(Self::raw(&grid, self.values.clone()))
    }
}

pub(crate) fn kinetic_from_spectrum(grid: &SpectralGrid, spec: &[C64]) -> f64 {
    let n = grid.n;
    let partial: Vec<f64> = spec
        .chunks(n)
        .zip(grid.k2.chunks(n))
        .map(|(s, k)| s.iter().zip(k).map(|(z, kk)| kk * z.norm_sqr()).sum())
        .collect();
    crate::par::pairwise_sum(&partial) * grid.cell_area() / (n * n) as f64
}

/// Apply a radial Fourier multiplier `m(|k|²)`.
pub(crate) fn apply_multiplier(f: &ComplexField, m: impl Fn(f64) -> C64) -> ComplexField {
    let grid = f.grid();
    let mut s = f.spectrum();
    for (z, &kk) in s.iter_mut().zip(grid.k2()) {
        *z *= m(kk);
    }
    grid.ifft2(&mut s);
    ComplexField::raw(grid, s)
}

/// Free Schrödinger evolution `e^{irΔ}f`, i.e. the multiplier `e^{-ir|k|²}`.
pub fn propagate(f: &ComplexField, r: f64) -> ComplexField {
    if r == 0.0 {
        return f.clone();
    }
    apply_multiplier(f, |kk| C64::from_polar(1.0, -r * kk))
}

/// Spectral Laplacian.
pub fn laplacian(f: &ComplexField) -> ComplexField {
    apply_multiplier(f, |kk| C64::new(-kk, 0.0))
}

/// `(mass, kinetic) = (‖f‖², ‖∇f‖²)`.
pub fn field_norms(f: &ComplexField) -> (f64, f64) {
    (f.mass(), f.kinetic())
}

/// Sample `rule(x1, x2)` on every grid point.
pub fn sample_function(grid: &Grid, rule: impl Fn(f64, f64) -> C64) -> Result<ComplexField> {
    let n = grid.n;
    let mut values = Vec::with_capacity(n * n);
    for i in 0..n {
        let x1 = grid.coord(i);
        for j in 0..n {
            let z = rule(x1, grid.coord(j));
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::NonFinite { row: i, col: j });
            }
            values.push(z);
        }
    }
    Ok(ComplexField::raw(grid, values))
}

/// Density centroid on the torus (circular mean per axis).
pub fn centroid(f: &ComplexField) -> [f64; 2] {
    let g = f.grid();
    let n = g.n;
    let w = 2.0 * std::f64::consts::PI / g.length;
    let mut acc = [C64::new(0.0, 0.0); 2];
    for i in 0..n {
        for j in 0..n {
            let d = f.values[i * n + j].norm_sqr();
            acc[0] += C64::from_polar(d, w * g.coord(i));
            acc[1] += C64::from_polar(d, w * g.coord(j));
        }
    }
    acc.map(|z| if z.norm() > 0.0 { z.arg() / w } else { 0.0 })
}

/// Fraction of the mass farther than `L/4` (periodic distance) from the centroid.
///
/// A localized profile keeps this tiny; a profile spreading over the box does not.
pub fn tail_mass_fraction(f: &ComplexField) -> f64 {
    let g = f.grid();
    let n = g.n;
    let total: f64 = f.values.iter().map(|z| z.norm_sqr()).sum();
    if total == 0.0 {
        return 0.0;
    }
    let c = centroid(f);
    let wrap = |d: f64| d - g.length * (d / g.length).round();
    let r2 = (0.25 * g.length).powi(2);
    let mut out = 0.0;
    for i in 0..n {
        let d1 = wrap(g.coord(i) - c[0]);
        for j in 0..n {
            let d2 = wrap(g.coord(j) - c[1]);
            if d1 * d1 + d2 * d2 > r2 {
                out += f.values[i * n + j].norm_sqr();
            }
        }
    }
    out / total
}

/// Translate by `shift` (spectrally exact for band-limited fields).
pub fn translate(f: &ComplexField, shift: [f64; 2]) -> ComplexField {
    let g = f.grid();
    let n = g.n;
    let mut s = f.spectrum();
    for i in 0..n {
        for j in 0..n {
            let ph = -(g.wavenumbers[i] * shift[0] + g.wavenumbers[j] * shift[1]);
            s[i * n + j] *= C64::from_polar(1.0, ph);
        }
    }
    g.ifft2(&mut s);
    ComplexField::raw(g, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn gaussian(grid: &Grid, sigma0: f64) -> ComplexField {
        sample_function(grid, |x, y| C64::new((-(x * x + y * y) / sigma0).exp(), 0.0)).unwrap()
    }

    #[test]
    fn grid_n8_wavenumbers() {
        let g = make_grid(8, 8.0).unwrap();
        assert_eq!(g.dx(), 1.0);
        let expect = [0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0].map(|m| m * 2.0 * PI / 8.0);
        assert_eq!(g.wavenumbers(), &expect);
    }

    #[test]
    fn grid_spacing_256() {
        let g = make_grid(256, 40.0).unwrap();
        assert_eq!(g.dx(), 0.15625);
        assert_eq!(g.dx() * 256.0, g.length());
    }

    #[test]
    fn grid_rejects_bad_sizes() {
        assert!(matches!(make_grid(12, 10.0), Err(Error::InvalidGrid(_))));
        assert!(matches!(make_grid(4, 10.0), Err(Error::InvalidGrid(_))));
        assert!(matches!(make_grid(16, 0.0), Err(Error::InvalidGrid(_))));
        assert!(matches!(make_grid(16, -1.0), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn propagate_zero_time_is_identity() {
        let g = make_grid(32, 10.0).unwrap();
        let f = gaussian(&g, 1.0);
        assert_eq!(propagate(&f, 0.0).values(), f.values());
    }

    #[test]
    fn torus_mode_is_eigenfunction() {
        let g = make_grid(32, 10.0).unwrap();
        let (kx, ky) = (g.wavenumbers()[3], g.wavenumbers()[30]);
        let f = sample_function(&g, |x, y| C64::from_polar(1.0, kx * x + ky * y)).unwrap();
        let r = 0.37;
        let u = propagate(&f, r);
        let ph = C64::from_polar(1.0, -r * (kx * kx + ky * ky));
        for (a, b) in u.values().iter().zip(f.values()) {
            assert!((a - b * ph).norm() < 1e-12);
        }
        let lap = laplacian(&f);
        for (a, b) in lap.values().iter().zip(f.values()) {
            assert!((a + b * (kx * kx + ky * ky)).norm() < 1e-10);
        }
    }

    #[test]
    fn laplacian_of_constant_vanishes() {
        let g = make_grid(16, 5.0).unwrap();
        let f = sample_function(&g, |_, _| C64::new(2.5, -1.0)).unwrap();
        assert!(laplacian(&f).values().iter().all(|z| z.norm() < 1e-13));
    }

    #[test]
    fn laplacian_of_gaussian_at_origin() {
        let g = make_grid(256, 40.0).unwrap();
        for s in [1.0, 2.0] {
            let v = laplacian(&gaussian(&g, s)).at_origin();
            assert!(((v.re + 4.0 / s) / (4.0 / s)).abs() < 1e-6, "{v}");
        }
    }

    #[test]
    fn gaussian_mass_and_kinetic() {
        let g = make_grid(256, 40.0).unwrap();
        let (m, k) = field_norms(&gaussian(&g, 2.0));
        assert!((m - PI).abs() / PI < 1e-8);
        assert!((k - PI).abs() / PI < 1e-8);
        let (m0, k0) = field_norms(&ComplexField::zeros(&g));
        assert_eq!((m0, k0), (0.0, 0.0));
    }

    #[test]
    fn sample_origin_and_nan() {
        let g = make_grid(16, 4.0).unwrap();
        let f = sample_function(&g, |x, y| C64::new((-(x * x + y * y)).exp(), 0.0)).unwrap();
        assert_eq!(f.at_origin(), C64::new(1.0, 0.0));
        let err = sample_function(&g, |x, y| {
            if x == g.coord(3) && y == g.coord(5) { C64::new(f64::NAN, 0.0) } else { C64::new(1.0, 0.0) }
        });
        assert!(matches!(err, Err(Error::NonFinite { row: 3, col: 5 })));
    }

    #[test]
    fn translation_moves_centroid() {
        let g = make_grid(64, 20.0).unwrap();
        let f = gaussian(&g, 1.0);
        let t = translate(&f, [1.25, -2.0]);
        let c = centroid(&t);
        assert!((c[0] - 1.25).abs() < 1e-6 && (c[1] + 2.0).abs() < 1e-6, "{c:?}");
        assert!(tail_mass_fraction(&t) < 1e-12);
    }

    #[test]
    fn spread_profile_has_large_tail() {
        let g = make_grid(64, 20.0).unwrap();
        let f = sample_function(&g, |_, _| C64::new(1.0, 0.0)).unwrap();
        assert!(tail_mass_fraction(&f) > 0.5);
    }
}
