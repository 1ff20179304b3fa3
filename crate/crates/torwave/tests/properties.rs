//! Property suites over randomized fields and parameters.

use num_complex::Complex64;
use proptest::prelude::*;
use torwave::blowup::{omega, omega_inv};
use torwave::field::{h_inner_product, SobolevIndex, SpectralField, Wavenumber};

fn arb_field(max_n: u32) -> impl Strategy<Value = SpectralField> {
    (1..=max_n, proptest::collection::vec((-3i64..=3, -3i64..=3, -3i64..=3, -1.0f64..1.0, -1.0f64..1.0), 1..12))
        .prop_map(|(n, modes)| {
            let pairs: Vec<(Wavenumber, Complex64)> = modes
                .into_iter()
                .map(|(k1, k2, k3, re, im)| {
                    let clamp = |c: i64| c.clamp(-(n as i64), n as i64);
                    (
                        Wavenumber([clamp(k1), clamp(k2), clamp(k3)]),
                        Complex64::new(re, im),
                    )
                })
                .collect();
            // later assignments overwrite earlier ones; conflicts are avoided
            // by folding duplicate ±k pairs into a consistent map first
            let mut by_key: std::collections::HashMap<[i64; 3], Complex64> =
                std::collections::HashMap::new();
            for (k, v) in pairs {
                let (key, val) = if k.is_zero() {
                    (k.0, Complex64::new(v.re, 0.0))
                } else if k.0 < k.neg().0 {
                    (k.0, v)
                } else {
                    (k.neg().0, v.conj())
                };
                by_key.insert(key, val);
            }
            let deduped: Vec<(Wavenumber, Complex64)> = by_key
                .into_iter()
                .map(|(k, v)| (Wavenumber(k), v))
                .collect();
            SpectralField::from_modes(n, &deduped, true).expect("consistent assignment")
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn physical_roundtrip_is_identity(f in arb_field(3)) {
        let grid = SpectralField::dealias_grid(f.n());
        let samples = f.to_physical(grid).unwrap();
        let g = SpectralField::from_physical(&samples, grid, f.n()).unwrap();
        let worst = f
            .coeffs()
            .iter()
            .zip(g.coeffs())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        prop_assert!(worst < 1e-12, "roundtrip defect {worst:.3e}");
    }

    #[test]
    fn gradient_identity_all_orders(f in arb_field(3), mv in 0.0f64..4.0) {
        let m = SobolevIndex::new(mv).unwrap();
        let m1 = SobolevIndex::new(mv + 1.0).unwrap();
        let grad = f.gradient();
        let lhs = h_inner_product(
            &[&grad[0], &grad[1], &grad[2]],
            &[&grad[0], &grad[1], &grad[2]],
            m,
        )
        .unwrap()
        .sqrt();
        let rhs = f.sobolev_norm(m1, true);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
    }

    #[test]
    fn norm_decomposition(f in arb_field(3), mv in 0.5f64..4.0) {
        let m = SobolevIndex::new(mv).unwrap();
        let full = f.sobolev_norm_sq(m, false);
        let hom = f.sobolev_norm_sq(m, true);
        let mean = f.mean_part().unwrap();
        prop_assert!((full - (mean * mean + hom)).abs() <= 1e-10 * (1.0 + full));
    }

    #[test]
    fn norm_scales_homogeneously(f in arb_field(3), c in -5.0f64..5.0) {
        let m = SobolevIndex::new(2.0).unwrap();
        let scaled = f.scaled(c);
        let want = c.abs() * f.sobolev_norm(m, false);
        prop_assert!((scaled.sobolev_norm(m, false) - want).abs() <= 1e-12 * (1.0 + want));
    }

    #[test]
    fn product_commutes_and_stays_real(a in arb_field(2), b in arb_field(2)) {
        prop_assume!(a.n() == b.n());
        let ab = a.multiply(&b).unwrap();
        let ba = b.multiply(&a).unwrap();
        let worst = ab
            .coeffs()
            .iter()
            .zip(ba.coeffs())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0f64, f64::max);
        prop_assert!(worst < 1e-12);
        prop_assert!(ab.hermitian_error() < 1e-12);
        let cubic = a.cubic_one_plus().unwrap();
        prop_assert!(cubic.hermitian_error() < 1e-12);
    }

    #[test]
    fn inner_product_symmetric_and_positive(a in arb_field(3), b in arb_field(3)) {
        prop_assume!(a.n() == b.n());
        let m = SobolevIndex::new(2.5).unwrap();
        let ab = h_inner_product(&[&a], &[&b], m).unwrap();
        let ba = h_inner_product(&[&b], &[&a], m).unwrap();
        prop_assert!((ab - ba).abs() <= 1e-12 * (1.0 + ab.abs()));
        let aa = h_inner_product(&[&a], &[&a], m).unwrap();
        prop_assert!(aa >= 0.0);
    }

    #[test]
    fn time_change_round_trips(kappa in 0.05f64..0.95, tau in 1.0f64..1.999) {
        let t = omega_inv(tau, kappa);
        prop_assert!((omega(t, kappa) - tau).abs() < 1e-13);
        prop_assert!(t >= 0.0);
    }

    #[test]
    fn condition_reports_recompute_bit_identically(
        lhs in -10.0f64..10.0,
        rhs in -10.0f64..10.0,
    ) {
        let a = torwave::diag::ConditionReport::le("x", lhs, rhs);
        let b = torwave::diag::ConditionReport::le("x", lhs, rhs);
        prop_assert_eq!(a.margin.to_bits(), b.margin.to_bits());
        prop_assert_eq!(a.satisfied, b.satisfied);
    }
}
