use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::error::Result;
use crate::scalar::{from_usize, lit, Scalar};

use super::adaptive::Tolerance;
use super::gauss::{gauss_legendre, QuadRule};

/// Product cubature on the unit sphere `S^m ⊂ R^{m+1}`.
///
/// `S^0` is the two-point set, `S^1` uses the trapezoid rule in the angle and
/// `S^m`, `m >= 2`, recurses through `ω = (cos φ, sin φ ω')` with
/// Gauss–Legendre in `φ ∈ [0, π]`. Weights sum to the surface area `σ_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereRule<T> {
    pub dim: usize,
    pub points: Vec<Vec<T>>,
    pub weights: Vec<T>,
}

impl<T: Scalar> SphereRule<T> {
    pub fn new(dim: usize, nodes: usize) -> Result<Self> {
        let nodes = nodes.max(2);
        match dim {
            0 => Ok(Self {
                dim,
                points: vec![vec![-T::one()], vec![T::one()]],
                weights: vec![T::one(), T::one()],
            }),
            1 => {
                let step = T::TAU() / from_usize(nodes);
                let points = (0..nodes)
                    .map(|j| {
                        let a = (from_usize::<T>(j) + lit(0.5)) * step;
                        vec![a.cos(), a.sin()]
                    })
                    .collect();
                Ok(Self {
                    dim,
                    points,
                    weights: vec![step; nodes],
                })
            }
            _ => {
                let inner = Self::new(dim - 1, nodes)?;
                let rule: QuadRule<T> = gauss_legendre(nodes)?;
                let half_pi = T::FRAC_PI_2();
                let mut points = Vec::with_capacity(nodes * inner.points.len());
                let mut weights = Vec::with_capacity(points.capacity());
                for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                    let phi = half_pi * (x + T::one());
                    let (s, c) = phi.sin_cos();
                    let wphi = w * half_pi * s.powi(dim as i32 - 1);
                    for (p, &wi) in inner.points.iter().zip(&inner.weights) {
                        let mut v = Vec::with_capacity(dim + 1);
                        v.push(c);
                        v.extend(p.iter().map(|&q| s * q));
                        points.push(v);
                        weights.push(wphi * wi);
                    }
                }
                Ok(Self {
                    dim,
                    points,
                    weights,
                })
            }
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `∫_{S^m} f(ω) dω`.
    pub fn integrate<F: FnMut(&[T]) -> T>(&self, mut f: F) -> T {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(p, &w)| w * f(p))
            .sum()
    }

    /// Normalized average over the sphere.
    pub fn average<F: FnMut(&[T]) -> T>(&self, f: F) -> T {
        let area: T = self.weights.iter().copied().sum();
        self.integrate(f) / area
    }
}

/// Built direction rules keyed by `(dimension, nodes)`.
type RuleCache<T> = Arc<RwLock<HashMap<(usize, usize), Arc<SphereRule<T>>>>>;

/// Quadrature settings shared by the transforms, dual operators and inversion
/// pipelines. Sphere rules are built lazily and shared between clones.
#[derive(Clone)]
pub struct QuadConfig<T> {
    /// Gauss–Legendre nodes per 1-D factor of product rules.
    pub nodes: usize,
    /// Nodes per angular factor of direction-sphere rules.
    pub direction_nodes: usize,
    /// Upper bound on the number of points of one direction-sphere rule; the
    /// per-factor count is lowered for high-dimensional spheres to respect it.
    pub max_direction_points: usize,
    /// Stopping rule for the adaptive 1-D integrals.
    pub tol: Tolerance<T>,
    cache: RuleCache<T>,
}

impl<T: Scalar> Default for QuadConfig<T> {
    fn default() -> Self {
        Self {
            nodes: 64,
            direction_nodes: 64,
            max_direction_points: 1 << 16,
            tol: Tolerance::new(lit(1e-13), lit(1e-12)),
            cache: Arc::default(),
        }
    }
}

impl<T> fmt::Debug for QuadConfig<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuadConfig")
            .field("nodes", &self.nodes)
            .field("direction_nodes", &self.direction_nodes)
            .field("max_direction_points", &self.max_direction_points)
            .finish_non_exhaustive()
    }
}

impl<T: Scalar> QuadConfig<T> {
    pub fn with_nodes(mut self, nodes: usize, direction_nodes: usize) -> Self {
        self.nodes = nodes;
        self.direction_nodes = direction_nodes;
        self.cache = Arc::default();
        self
    }

    /// Cached rule on `S^dim`.
    pub fn sphere(&self, dim: usize) -> Result<Arc<SphereRule<T>>> {
        let mut per_factor = self.direction_nodes.max(2);
        // S^1 carries `n` points, S^m carries `n^m` points.
        while dim >= 2 && per_factor > 4 && per_factor.pow(dim as u32) > self.max_direction_points {
            per_factor -= 2;
        }
        let key = (dim, per_factor);
        if let Some(r) = self.cache.read().expect("rule cache poisoned").get(&key) {
            return Ok(r.clone());
        }
        let built = Arc::new(SphereRule::new(dim, per_factor)?);
        Ok(self
            .cache
            .write()
            .expect("rule cache poisoned")
            .entry(key)
            .or_insert(built)
            .clone())
    }

    pub fn line_rule(&self) -> Result<QuadRule<T>> {
        gauss_legendre(self.nodes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::sphere_area;
    use approx::assert_abs_diff_eq;

    #[test]
    fn weights_sum_to_area() {
        for m in 0..5 {
            let r = SphereRule::<f64>::new(m, 12).unwrap();
            let area: f64 = r.weights.iter().sum();
            assert_abs_diff_eq!(area, sphere_area::<f64>(m as i64).unwrap(), epsilon = 1e-12);
            for p in &r.points {
                let n2: f64 = p.iter().map(|v| v * v).sum();
                assert_abs_diff_eq!(n2, 1.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn second_moments_isotropic() {
        // ∫ ω_i² dω = σ_m / (m + 1)
        let r = SphereRule::<f64>::new(3, 24).unwrap();
        let area = sphere_area::<f64>(3).unwrap();
        for i in 0..4 {
            let v = r.integrate(|w| w[i] * w[i]);
            assert_abs_diff_eq!(v, area / 4.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn budget_limits_point_count() {
        let cfg = QuadConfig::<f64>::default();
        let r = cfg.sphere(4).unwrap();
        assert!(r.len() <= cfg.max_direction_points * 2);
        let same = cfg.sphere(4).unwrap();
        assert!(Arc::ptr_eq(&r, &same));
    }
}
