//! Randomized invariants of the geometry, kernels and transforms.

use georadon::dual::{dual_shifted_mean, DualConfig};
use georadon::geometry::{distance_rho, haar_rotation, Geodesic, Point, Space};
use georadon::kernels::{phi_closed, phi_oracle, KernelParams};
use georadon::phantom::phantom;
use georadon::transforms::{radon_forward, spherical_mean};
use georadon::QuadConfig64;
use proptest::prelude::*;

fn spaces() -> Vec<Space> {
    vec![
        Space::euclidean(3, 1).unwrap(),
        Space::sphere(3, 2).unwrap(),
        Space::hyperbolic(3, 1).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn distance_is_isometry_invariant(which in 0usize..3, seed in any::<u64>(), a in -0.6f64..0.6, b in -0.6f64..0.6) {
        let s = &spaces()[which];
        let x = Point::from_spatial(s, &[a, b, 0.3]).unwrap();
        let xi = Geodesic::base(s);
        let g = haar_rotation::<f64>(s, seed);
        let before = distance_rho(s, &x, &xi).unwrap();
        let after = distance_rho(s, &g.apply_point(&x), &xi.rotated(&g)).unwrap();
        prop_assert!((before - after).abs() < 1e-10);
    }

    #[test]
    fn kernel_closed_form_matches_quadrature(m in 0i32..4, frac in 0.05f64..0.95, u in prop_oneof![0.05f64..0.95, 1.05f64..3.0]) {
        let alpha = -1.0 + frac * (m as f64 + 2.0);
        prop_assume!((alpha - alpha.round()).abs() > 0.03);
        let p = KernelParams::new(alpha, m).unwrap();
        let gap = (phi_closed(&p, u).unwrap() - phi_oracle(&p, u).unwrap()).abs();
        prop_assert!(gap < 1e-7, "alpha={alpha} m={m} u={u} gap={gap}");
    }

    #[test]
    fn radon_transform_is_rotation_covariant(seed in any::<u64>()) {
        // The centered Gaussian is rotation invariant, so Rf(gξ) = Rf(ξ).
        let s = Space::euclidean(3, 2).unwrap();
        let f = phantom::<f64>("gaussian", &s, None).unwrap();
        let xi = Geodesic::plane(&s, vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]], vec![0.0, 0.0, 0.4]).unwrap();
        let g = haar_rotation::<f64>(&s, seed);
        let q = QuadConfig64::default();
        let a = radon_forward(&s, &f, &xi, &q).unwrap();
        let b = radon_forward(&s, &f, &xi.rotated(&g), &q).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn means_of_constants_are_constant(which in 0usize..3, t in 0.05f64..0.9, c in -3.0f64..3.0) {
        let s = &spaces()[which];
        let one = phantom::<f64>("constant", s, None).unwrap().scaled(c);
        let x = Point::base(s);
        let q = QuadConfig64::default();
        // Section parameter: radius, cosine, or hyperbolic cosine.
        let t = [t, t, 1.0 + t][which];
        let m = spherical_mean(s, &one, &x, t, &q).unwrap();
        prop_assert!((m - c).abs() < 1e-10 * (1.0 + c.abs()));
    }

    #[test]
    fn shifted_dual_is_linear(r in 0.0f64..0.8, c in 0.1f64..4.0) {
        let s = Space::euclidean(2, 1).unwrap();
        let f = phantom::<f64>("gaussian", &s, None).unwrap();
        let x = Point::from_spatial(&s, &[0.3, -0.2]).unwrap();
        let cfg = DualConfig::default();
        let a = dual_shifted_mean(&s, &f, &x, r, &cfg).unwrap();
        let b = dual_shifted_mean(&s, &f.scaled(c), &x, r, &cfg).unwrap();
        prop_assert!((b - c * a).abs() < 1e-10 * (1.0 + b.abs()));
    }
}
