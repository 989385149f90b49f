//! Ready-made fields: Gaussians, chirped Gaussians and seeded random smooth profiles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::gaussian_oracle::{sample_gaussian, GaussianParams};
use crate::spectral::{propagate, sample_function, ComplexField, Grid, C64};

/// Mass-`λ` Gaussian of width `σ₀`, pre-chirped so its free evolution focuses at `r = focus`.
pub fn chirped_gaussian(grid: &Grid, lambda: f64, sigma0: f64, focus: f64) -> Result<ComplexField> {
    let g = sample_gaussian(grid, &GaussianParams::with_mass(lambda, sigma0)?)?;
    Ok(propagate(&g, -focus))
}

/// A few complex Gaussian bumps with random centres, widths, phases and chirps.
///
/// `scale` sets the length unit; the profile stays within a few `scale` of
/// the origin, so a box of side `16·scale` holds it with negligible tails.
pub fn random_smooth(grid: &Grid, seed: u64, scale: f64) -> ComplexField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bumps: Vec<_> = (0..3)
        .map(|_| {
            let c = [rng.gen_range(-1.0..1.0) * scale, rng.gen_range(-1.0..1.0) * scale];
            let w = rng.gen_range(0.5..1.5) * scale * scale;
            let a = C64::from_polar(rng.gen_range(0.3..1.0), rng.gen_range(0.0..std::f64::consts::TAU));
            let chirp = rng.gen_range(-0.3..0.3) / (scale * scale);
            let tilt = [rng.gen_range(-0.5..0.5) / scale, rng.gen_range(-0.5..0.5) / scale];
            (c, w, a, chirp, tilt)
        })
        .collect();
    sample_function(grid, |x, y| {
        bumps
            .iter()
            .map(|&(c, w, a, chirp, tilt)| {
                let r2 = (x - c[0]).powi(2) + (y - c[1]).powi(2);
                a * C64::new(-r2 / w, chirp * r2 + tilt[0] * x + tilt[1] * y).exp()
            })
            .sum()
    })
    .expect("bounded profile")
}

/// Small seeded complex noise, band-limited to the lowest modes, with L² norm `amplitude`.
pub fn smooth_noise(grid: &Grid, seed: u64, amplitude: f64) -> ComplexField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = grid.n();
    let kmax = 4.0 * std::f64::consts::TAU / grid.length();
    let mut spec = vec![C64::new(0.0, 0.0); n * n];
    for (z, &kk) in spec.iter_mut().zip(grid.k2()) {
        if kk <= kmax * kmax {
            *z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
    }
    let f = ComplexField::from_spectrum(grid, spec).expect("finite noise");
    let norm = f.norm();
    f.scaled_re(amplitude / norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{make_grid, tail_mass_fraction};

    #[test]
    fn random_profiles_are_seeded_and_localized() {
        let g = make_grid(64, 16.0).unwrap();
        let a = random_smooth(&g, 9, 1.0);
        let b = random_smooth(&g, 9, 1.0);
        let c = random_smooth(&g, 10, 1.0);
        assert_eq!(a.values(), b.values());
        assert_ne!(a.values(), c.values());
        assert!(tail_mass_fraction(&a) < 1e-6);
    }

    #[test]
    fn chirped_gaussian_keeps_mass() {
        let g = make_grid(128, 32.0).unwrap();
        let f = chirped_gaussian(&g, 3.0, 1.0, 0.5).unwrap();
        assert!((f.mass() - 3.0).abs() < 1e-8);
    }

    #[test]
    fn noise_has_requested_norm() {
        let g = make_grid(32, 10.0).unwrap();
        let f = smooth_noise(&g, 1, 0.01);
        assert!((f.norm() - 0.01).abs() < 1e-15);
    }
}
