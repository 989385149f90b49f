use proptest::prelude::*;

use dmnls::functional::{gauss_legendre_rule, hamiltonian, weinstein_ratio, ModelParams};
use dmnls::io_report::{decode_field, encode_field};
use dmnls::profiles::random_smooth;
use dmnls::quadrature::Window;
use dmnls::spectral::{make_grid, propagate, translate, ComplexField, Grid, C64};
use dmnls::window::WindowRule;

fn grid() -> Grid {
    make_grid(32, 12.0).unwrap()
}

fn field(seed: u64) -> ComplexField {
    random_smooth(&grid(), seed, 1.0)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn propagation_is_unitary_and_keeps_kinetic(seed in 0u64..1000, r in -3.0f64..3.0) {
        let f = field(seed);
        let u = propagate(&f, r);
        prop_assert!(close(u.mass(), f.mass(), 1e-12));
        prop_assert!(close(u.kinetic(), f.kinetic(), 1e-12));
    }

    #[test]
    fn propagation_group_law(seed in 0u64..1000, r in -2.0f64..2.0, s in -2.0f64..2.0) {
        let f = field(seed);
        let a = propagate(&propagate(&f, r), s);
        let b = propagate(&f, r + s);
        prop_assert!(a.axpy(-1.0, &b).norm() <= 1e-12 * f.norm());
    }

    #[test]
    fn parseval(seed in 0u64..1000) {
        let f = field(seed);
        let g = f.grid();
        let n2 = (g.n() * g.n()) as f64;
        let spectral: f64 = f.spectrum().iter().map(|z| z.norm_sqr()).sum::<f64>() * g.cell_area() / n2;
        prop_assert!(close(spectral, f.mass(), 1e-12));
    }

    #[test]
    fn hamiltonian_gauge_and_translation_invariant(seed in 0u64..1000, theta in 0.0f64..6.3, i in -8i32..8, j in -8i32..8) {
        let f = field(seed);
        let params = ModelParams::new(1.0, 3.0, f.mass()).unwrap();
        let rule = gauss_legendre_rule(12, 0.0, 1.0).unwrap();
        let h = hamiltonian(&f, &params, &rule).total;
        let rotated = hamiltonian(&f.scaled(C64::from_polar(1.0, theta)), &params, &rule).total;
        // whole-cell shifts: the pointwise power is only sampled on the lattice
        let h0 = f.grid().dx();
        let moved = hamiltonian(&translate(&f, [i as f64 * h0, j as f64 * h0]), &params, &rule).total;
        prop_assert!(close(h, rotated, 1e-11));
        prop_assert!(close(h, moved, 1e-9));
    }

    #[test]
    fn ratio_ignores_amplitude(seed in 0u64..1000, c in 0.05f64..20.0) {
        let f = field(seed);
        let rule = WindowRule::new(Window::unit(), 12, 1.0).unwrap();
        let a = weinstein_ratio(&f, 6.0, &rule).unwrap();
        let b = weinstein_ratio(&f.scaled(C64::new(0.0, c)), 6.0, &rule).unwrap();
        prop_assert!(close(a, b, 1e-12));
    }

    #[test]
    fn field_file_round_trip(seed in 0u64..1000) {
        let f = field(seed);
        let bytes = encode_field(&f);
        let g = decode_field(&bytes).unwrap();
        prop_assert_eq!(g.grid().length().to_bits(), f.grid().length().to_bits());
        for (a, b) in g.values().iter().zip(f.values()) {
            prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
            prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
        prop_assert_eq!(encode_field(&g), bytes);
    }

    #[test]
    fn window_dilation_identity(seed in 0u64..1000, tau in 0.5f64..3.0) {
        // R_[0,1](f(√τ·)) = R_[0,τ](f) for the sextic ratio
        let f = field(seed);
        let dilated = f.relabeled(f.grid().length() / tau.sqrt()).unwrap();
        let a = weinstein_ratio(&dilated, 6.0, &WindowRule::new(Window::unit(), 32, 1.0).unwrap()).unwrap();
        let b = weinstein_ratio(&f, 6.0, &WindowRule::new(Window::new(0.0, tau).unwrap(), 32, tau).unwrap()).unwrap();
        prop_assert!(close(a, b, 1e-9), "{} vs {}", a, b);
    }
}
