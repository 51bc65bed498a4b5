//! The generic core instantiated at `f32`.

use georadon::constants::{inversion_constant, Theorem};
use georadon::geometry::{distance_rho, Geodesic, Point, Space};
use georadon::kernels::{phi_closed, psi_k_closed, KernelParams};
use georadon::numerics::{endpoint_derivative, RadialProfile};

#[test]
fn kernels_agree_with_double_precision() {
    for (alpha, m, u) in [(0.3f64, 1, 0.4f64), (1.5, 2, 2.2), (-0.5, 0, 0.7)] {
        let p32 = KernelParams::<f32>::new(alpha as f32, m).unwrap();
        let p64 = KernelParams::<f64>::new(alpha, m).unwrap();
        let a = phi_closed(&p32, u as f32).unwrap() as f64;
        let b = phi_closed(&p64, u).unwrap();
        assert!((a - b).abs() < 1e-4 * (1.0 + b.abs()), "{a} vs {b}");
    }
    let v = psi_k_closed::<f32>(1, 0.5).unwrap();
    assert!((v + std::f32::consts::PI * 2f32.ln()).abs() < 1e-4);
}

#[test]
fn constants_in_single_precision() {
    let s = Space::euclidean(3, 2).unwrap();
    let c = inversion_constant::<f32>(&s, Theorem::Thm1Even).unwrap();
    assert!((c.value - 8.0 * std::f32::consts::PI).abs() < 1e-4);
}

#[test]
fn geometry_in_single_precision() {
    let s = Space::hyperbolic(2, 1).unwrap();
    let x = Point::<f32>::from_spatial(&s, &[0.3, 0.0]).unwrap();
    let rho = distance_rho(&s, &x, &Geodesic::base(&s)).unwrap();
    let rho64 = distance_rho(&s, &Point::<f64>::from_spatial(&s, &[0.3, 0.0]).unwrap(), &Geodesic::base(&s)).unwrap();
    assert!((rho as f64 - rho64).abs() < 1e-6);
}

#[test]
fn endpoint_derivative_in_single_precision() {
    let grid = RadialProfile::<f32>::one_sided_grid(0.05, 12);
    let values = grid.iter().map(|&r| 1.0 + 2.0 * r + 3.0 * r * r).collect();
    let p = RadialProfile::new(grid, values, "quadratic").unwrap();
    let d = endpoint_derivative(&p, 2, 3).unwrap();
    assert!((d.value - 6.0).abs() < 1e-2, "{}", d.value);
}

