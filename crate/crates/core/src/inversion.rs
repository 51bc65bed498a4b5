//! Reconstruction of `f(x)` from its transform: the parity-split Mader
//! operators, the weighted shifted dual for even `k`, and the classical
//! hyperplane formulas.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::constants::{inversion_constant_with, mader_constant, InversionConstant, SphereEvenForm, Theorem};
use crate::dual::{dual_profile, DualConfig, RadialOperator};
use crate::error::{domain, Error, Result};
use crate::geometry::{Geodesic, Point, Space, SpaceKind};
use crate::numerics::{
    endpoint_derivative, integrate_adaptive, quad_log_singular, QuadConfig, RadialProfile,
};
use crate::phantom::{HyperplaneData, ScalarField};
use crate::scalar::{dot, lit, unit, Scalar};
use crate::transforms::radon_forward;

/// Grid and fit settings of the inversion pipelines.
#[derive(Debug, Clone)]
pub struct InversionConfig<T> {
    /// Grid step relative to the phantom scale: `h = grid_h · scale`.
    pub grid_h: T,
    /// Number of steps: the grid is `r_j = j h`, `j = 0..=grid_j` (two-sided
    /// for the hyperplane formulas).
    pub grid_j: usize,
    /// Polynomial degree of the endpoint fit; `None` picks `order + 2` for
    /// the radial pipelines and `order + 4` for the hyperplane formulas.
    pub fit_degree: Option<usize>,
    /// Fit residual above which the report carries a conditioning warning.
    pub residual_tol: T,
    /// Sign/normalization convention of the sphere even-`k` constant.
    pub sphere_form: SphereEvenForm,
    /// Truncation of the hyperplane `s`-integrals in units of the data scale.
    pub mader_cutoff: T,
    pub dual: DualConfig<T>,
}

impl<T: Scalar> Default for InversionConfig<T> {
    fn default() -> Self {
        Self {
            grid_h: lit(0.005),
            grid_j: 24,
            fit_degree: None,
            residual_tol: lit(1e-6),
            sphere_form: SphereEvenForm::Derived,
            mader_cutoff: lit(8.0),
            dual: DualConfig::default(),
        }
    }
}

/// Outcome of one reconstruction.
#[derive(Debug, Clone, Serialize)]
pub struct InversionReport<T> {
    /// Reconstructed `f(x)`.
    pub estimate: T,
    /// `f(x)` evaluated directly, when known.
    pub truth: Option<T>,
    pub rel_error: Option<T>,
    /// Endpoint derivative before division by the constant.
    pub derivative: T,
    pub derivative_order: usize,
    pub constant: InversionConstant<T>,
    /// Normalized residual of the endpoint polynomial fit.
    pub conditioning: T,
    pub warning: Option<String>,
    pub profile: RadialProfile<T>,
}

fn finish<T: Scalar>(
    profile: RadialProfile<T>,
    order: usize,
    degree: usize,
    constant: InversionConstant<T>,
    truth: Option<T>,
    cfg: &InversionConfig<T>,
) -> Result<InversionReport<T>> {
    let d = endpoint_derivative(&profile, order, degree)?;
    // Hyperplane constants multiply the derivative; the others divide it.
    let estimate = match constant.theorem {
        Theorem::MaderEven | Theorem::MaderOdd => d.value * constant.value,
        _ => d.value / constant.value,
    };
    let rel_error = truth.map(|t| {
        if t == T::zero() {
            estimate.abs()
        } else {
            ((estimate - t) / t).abs()
        }
    });
    let warning = (d.residual > cfg.residual_tol).then(|| {
        format!(
            "endpoint fit residual {:e} exceeds {:e}; the derivative may be unreliable",
            d.residual, cfg.residual_tol
        )
    });
    Ok(InversionReport {
        estimate,
        truth,
        rel_error,
        derivative: d.value,
        derivative_order: order,
        constant,
        conditioning: d.residual,
        warning,
        profile,
    })
}

fn radial_grid<T: Scalar>(f: &ScalarField<T>, cfg: &InversionConfig<T>) -> Result<Vec<T>> {
    if !(cfg.grid_h > T::zero()) {
        return Err(domain("grid_h", cfg.grid_h, "grid step must be positive"));
    }
    if cfg.grid_j < 4 {
        return Err(domain("grid_j", cfg.grid_j as f64, "at least 4 grid steps are required"));
    }
    Ok(RadialProfile::one_sided_grid(cfg.grid_h * f.scale, cfg.grid_j))
}

fn truth_at<T: Scalar>(f: &ScalarField<T>, x: &Point<T>) -> Option<T> {
    let v = f.eval(x);
    v.is_finite().then_some(v)
}

/// `f(x) = d_X^{-1} ∂_r^{k+1} (L*_r Rf)(x)|_{r=0}` for even `k` and
/// `d̃_X^{-1} ∂_r^{k+1} (L̃*_r Rf)(x)|_{r=0}` for odd `k`.
pub fn invert_thm1<T: Scalar>(
    space: &Space,
    f: &ScalarField<T>,
    x: &Point<T>,
    cfg: &InversionConfig<T>,
) -> Result<InversionReport<T>> {
    let k = space.k;
    let (op, theorem) = if space.k_is_even() {
        (RadialOperator::LStar, Theorem::Thm1Even)
    } else {
        (RadialOperator::LTildeStar, Theorem::Thm1Odd)
    };
    let constant = inversion_constant_with(space, theorem, cfg.sphere_form)?;
    let grid = radial_grid(f, cfg)?;
    let profile = dual_profile(op, space, f, x, &grid, &cfg.dual)?;
    let order = k + 1;
    finish(profile, order, cfg.fit_degree.unwrap_or(order + 2), constant, truth_at(f, x), cfg)
}

/// `f(x) = c_X^{-1} ∂_r^k (λ_X(r) R*_r Rf)(x)|_{r=0}` for even `k`.
pub fn invert_thm2<T: Scalar>(
    space: &Space,
    f: &ScalarField<T>,
    x: &Point<T>,
    cfg: &InversionConfig<T>,
) -> Result<InversionReport<T>> {
    let constant = inversion_constant_with(space, Theorem::Thm2, cfg.sphere_form)?;
    let grid = radial_grid(f, cfg)?;
    let profile = dual_profile(RadialOperator::WeightedShiftedDual, space, f, x, &grid, &cfg.dual)?;
    let order = space.k;
    finish(profile, order, cfg.fit_degree.unwrap_or(order + 2), constant, truth_at(f, x), cfg)
}

/// Hyperplane data of `f` on `R^n`: the phantom's closed form when it has
/// one, otherwise `radon_forward` over the hyperplane `{y·θ = s}`.
pub fn hyperplane_data<T: Scalar>(f: &ScalarField<T>, n: usize, quad: &QuadConfig<T>) -> Result<HyperplaneData<T>> {
    if let Some(g) = f.hyperplane_closed_form(n) {
        return Ok(g);
    }
    let space = Space::euclidean(n, n - 1)?;
    f.check_space(&space)?;
    let f = f.clone();
    let quad = quad.clone();
    Ok(Arc::new(move |theta: &[T], s: T| {
        let directions = complement(theta);
        let offset: Vec<T> = theta.iter().map(|&v| v * s).collect();
        radon_forward(&space, &f, &Geodesic::Plane { directions, offset }, &quad).unwrap_or(T::nan())
    }))
}

/// Orthonormal basis of `θ^⊥`.
fn complement<T: Scalar>(theta: &[T]) -> Vec<Vec<T>> {
    let n = theta.len();
    let mut out: Vec<Vec<T>> = Vec::with_capacity(n - 1);
    for i in 0..n {
        if out.len() == n - 1 {
            break;
        }
        let mut v: Vec<T> = unit(n, i);
        for b in std::iter::once(theta).chain(out.iter().map(|b| b.as_slice())) {
            let p = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(a, &c)| *a -= p * c);
        }
        let nv = dot(&v, &v).sqrt();
        if nv > lit(1e-3) {
            out.push(v.into_iter().map(|a| a / nv).collect());
        }
    }
    out
}

/// `G(x, s) = (1/σ_{n-1}) ∫_{S^{n-1}} g(θ, s + x·θ) dθ`.
pub fn mader_radial_average<T: Scalar>(
    n: usize,
    g: &(dyn Fn(&[T], T) -> T + Send + Sync),
    x: &[T],
    s: T,
    quad: &QuadConfig<T>,
) -> Result<T> {
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.len(),
        });
    }
    let rule = quad.sphere(n - 1)?;
    Ok(rule.average(|theta| g(theta, s + dot(x, theta))))
}

/// Classical hyperplane inversion on `R^n`:
/// `f(x) = A_0 ∂_t^n F_0(x, t)|_0` with `F_0 = ∫ G(x, s) log|s − t| ds`
/// (even `n`) and `f(x) = A_1 ∂_t^n F_1(x, t)|_0` with
/// `F_1 = ∫ G(x, s) sgn(s − t) ds` (odd `n`).
///
/// `scale` is the decay length of the data in `s`; the `s`-integrals are
/// truncated at `|s| = mader_cutoff · scale + |x|`.
pub fn mader_classical<T: Scalar>(
    n: usize,
    g: &(dyn Fn(&[T], T) -> T + Send + Sync),
    x: &[T],
    scale: T,
    cfg: &InversionConfig<T>,
) -> Result<InversionReport<T>> {
    let constant = mader_constant::<T>(n)?;
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.len(),
        });
    }
    if !(scale > T::zero()) {
        return Err(domain("scale", scale, "data scale must be positive"));
    }
    if cfg.grid_j < 4 {
        return Err(domain("grid_j", cfg.grid_j as f64, "at least 4 grid steps are required"));
    }
    let quad = &cfg.dual.quad;
    let rule = quad.sphere(n - 1)?;
    let big_g = |s: T| rule.average(|theta| g(theta, s + dot(x, theta)));
    let cut = cfg.mader_cutoff * scale + dot(x, x).sqrt();
    let edge = big_g(cut).abs().max(big_g(-cut).abs());
    if edge * cut > lit(crate::transforms::TAIL_LIMIT) {
        return Err(Error::NotIntegrable {
            tail: (edge * cut).to_f64().unwrap_or(f64::NAN),
            limit: crate::transforms::TAIL_LIMIT,
        });
    }
    let grid = RadialProfile::symmetric_grid(cfg.grid_h * scale, cfg.grid_j);
    let values = grid
        .par_iter()
        .map(|&t| {
            if n.is_multiple_of(2) {
                quad_log_singular(|s| big_g(s) * (s - t).abs().ln(), -cut, cut, t)
            } else {
                let above = integrate_adaptive(big_g, t, cut, quad.tol)?.value;
                let below = integrate_adaptive(big_g, -cut, t, quad.tol)?.value;
                Ok(above - below)
            }
        })
        .collect::<Result<Vec<T>>>()?;
    let kernel = if n.is_multiple_of(2) { "F0" } else { "F1" };
    let profile = RadialProfile::new(grid, values, format!("{kernel}(x, t) on R^{n}"))?;
    finish(profile, n, cfg.fit_degree.unwrap_or(n + 4), constant, None, cfg)
}

/// [`mader_classical`] on the hyperplane data of a phantom, with the
/// phantom value as truth.
pub fn mader_invert_field<T: Scalar>(
    f: &ScalarField<T>,
    x: &Point<T>,
    cfg: &InversionConfig<T>,
) -> Result<InversionReport<T>> {
    let n = x.dim();
    let space = Space::euclidean(n, n - 1)?;
    f.check_space(&space)?;
    if space.kind != SpaceKind::Euclidean {
        return Err(Error::InvalidSpace("hyperplane inversion works on R^n".into()));
    }
    let g = hyperplane_data(f, n, &cfg.dual.quad)?;
    let mut report = mader_classical(n, g.as_ref(), x.coords(), f.scale, cfg)?;
    report.truth = truth_at(f, x);
    report.rel_error = report.truth.map(|t| ((report.estimate - t) / t).abs());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phantom::phantom;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn radial_average_examples() {
        let q = QuadConfig::<f64>::default();
        let g = |_: &[f64], s: f64| PI.sqrt() * (-s * s).exp();
        for s in [0.0, 0.4, 1.1] {
            let v = mader_radial_average(2, &g, &[0.0, 0.0], s, &q).unwrap();
            assert_abs_diff_eq!(v, PI.sqrt() * (-s * s).exp(), epsilon = 1e-13);
        }
        let lin = |_: &[f64], s: f64| s;
        assert_abs_diff_eq!(mader_radial_average(3, &lin, &[0.0; 3], 0.7, &q).unwrap(), 0.7, epsilon = 1e-13);
    }

    #[test]
    fn radial_average_shift_covariance() {
        // g for the Gaussian centered at c; G(x, s) for the data of f equals
        // G(0, s) for the data of f(· + x).
        let q = QuadConfig::<f64>::default();
        let x = [1.0, 0.0];
        let c = [0.3, -0.2];
        let g = move |t: &[f64], s: f64| PI.sqrt() * (-(s - t[0] * c[0] - t[1] * c[1]).powi(2)).exp();
        let shifted = move |t: &[f64], s: f64| {
            PI.sqrt() * (-(s - t[0] * (c[0] - x[0]) - t[1] * (c[1] - x[1])).powi(2)).exp()
        };
        for s in [-0.5, 0.2, 0.9] {
            let a = mader_radial_average(2, &g, &x, s, &q).unwrap();
            let b = mader_radial_average(2, &shifted, &[0.0, 0.0], s, &q).unwrap();
            assert_abs_diff_eq!(a, b, epsilon = 1e-13);
        }
    }

    #[test]
    fn complement_is_orthonormal() {
        let th = [0.6, 0.0, 0.8];
        let c = complement(&th);
        assert_eq!(c.len(), 2);
        for (i, a) in c.iter().enumerate() {
            assert_abs_diff_eq!(dot(a, &th), 0.0, epsilon = 1e-14);
            for (j, b) in c.iter().enumerate() {
                assert_abs_diff_eq!(dot(a, b), if i == j { 1.0 } else { 0.0 }, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn numeric_hyperplane_data_matches_closed_form() {
        let s = Space::euclidean(3, 2).unwrap();
        let c = Point::new(&s, vec![0.2, 0.1, -0.3]).unwrap();
        let f = phantom::<f64>("gaussian", &s, Some(&c)).unwrap();
        let custom = ScalarField::new("g", None, move |y: &[f64]| f.eval_coords(y), 6.0, false, Some(c.coords().to_vec()), 1.0);
        let q = QuadConfig::default();
        let numeric = hyperplane_data(&custom, 3, &q).unwrap();
        let f = phantom::<f64>("gaussian", &s, Some(&c)).unwrap();
        let exact = hyperplane_data(&f, 3, &q).unwrap();
        let th = [0.0, 0.6, 0.8];
        assert_abs_diff_eq!(numeric(&th, 0.3), exact(&th, 0.3), epsilon = 1e-10);
    }

    #[test]
    fn mader_recovers_gaussian() {
        for n in [2usize, 3] {
            let s = Space::euclidean(n, n - 1).unwrap();
            let f = phantom::<f64>("gaussian", &s, None).unwrap();
            let r = mader_invert_field(&f, &Point::base(&s), &InversionConfig::default()).unwrap();
            assert_abs_diff_eq!(r.estimate, 1.0, epsilon = 1e-3);
        }
    }

    #[test]
    fn mader_is_linear() {
        let s = Space::euclidean(2, 1).unwrap();
        let f = phantom::<f64>("gaussian", &s, None).unwrap();
        let cfg = InversionConfig::default();
        let a = mader_invert_field(&f, &Point::base(&s), &cfg).unwrap();
        let b = mader_invert_field(&f.scaled(2.0), &Point::base(&s), &cfg).unwrap();
        assert_abs_diff_eq!(b.estimate, 2.0 * a.estimate, epsilon = 1e-8);
    }

    #[test]
    fn weighted_dual_inversion_euclidean() {
        let s = Space::euclidean(3, 2).unwrap();
        let f = phantom::<f64>("gaussian", &s, None).unwrap();
        let r = invert_thm2(&s, &f, &Point::base(&s), &InversionConfig::default()).unwrap();
        assert_abs_diff_eq!(r.derivative, -2.0 * PI, epsilon = 2e-3 * PI);
        assert_abs_diff_eq!(r.estimate, 1.0, epsilon = 1e-3);
        assert!(invert_thm2(&Space::euclidean(2, 1).unwrap(), &phantom::<f64>("gaussian", &Space::euclidean(2, 1).unwrap(), None).unwrap(), &Point::base(&Space::euclidean(2, 1).unwrap()), &InversionConfig::default()).is_err());
    }

    #[test]
    fn translated_reconstruction_matches_centered() {
        let s = Space::euclidean(2, 1).unwrap();
        let cfg = InversionConfig::default();
        let f0 = phantom::<f64>("gaussian", &s, None).unwrap();
        let c = Point::new(&s, vec![0.7, -0.4]).unwrap();
        let f1 = phantom::<f64>("gaussian", &s, Some(&c)).unwrap();
        let a = invert_thm1(&s, &f0, &Point::base(&s), &cfg).unwrap();
        let b = invert_thm1(&s, &f1, &c, &cfg).unwrap();
        assert_abs_diff_eq!(a.estimate, b.estimate, epsilon = 1e-3);
    }
}
