use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{domain, Result};
use crate::scalar::{lit, Scalar};

pub const MAX_GAUSS_NODES: usize = 512;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadRule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Scalar> QuadRule<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrates `f` over `[a, b]` with the affinely mapped rule.
    pub fn integrate<F: FnMut(T) -> T>(&self, a: T, b: T, mut f: F) -> T {
        let half = (b - a) * lit(0.5);
        let mid = (b + a) * lit(0.5);
        let mut acc = T::zero();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }
}

fn cache() -> &'static RwLock<HashMap<usize, Arc<QuadRule<f64>>>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<QuadRule<f64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Newton iteration on `P_n` from the Chebyshev-like initial guesses; only the
/// non-negative half is solved and mirrored so that the rule is exactly
/// symmetric.
fn build_f64(n: usize) -> QuadRule<f64> {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        // Recompute the derivative at the converged node.
        let (mut p0, mut p1) = (1.0, x);
        for j in 2..=n {
            let jf = j as f64;
            let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
            p0 = p1;
            p1 = p2;
        }
        if n > 1 {
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    QuadRule { nodes, weights }
}

/// Returns the `n`-point Gauss–Legendre rule, `1 <= n <= 512`.
///
/// Rules are computed once in double precision and cached.
pub fn gauss_legendre<T: Scalar>(n: usize) -> Result<QuadRule<T>> {
    if n == 0 || n > MAX_GAUSS_NODES {
        return Err(domain("n", n as f64, "Gauss-Legendre order must be in 1..=512"));
    }
    let rule = {
        let read = cache().read().expect("rule cache poisoned");
        read.get(&n).cloned()
    };
    let rule = match rule {
        Some(r) => r,
        None => {
            let built = Arc::new(build_f64(n));
            cache()
                .write()
                .expect("rule cache poisoned")
                .entry(n)
                .or_insert(built)
                .clone()
        }
    };
    Ok(QuadRule {
        nodes: rule.nodes.iter().map(|&x| lit(x)).collect(),
        weights: rule.weights.iter().map(|&w| lit(w)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn two_point_rule() {
        let r = gauss_legendre::<f64>(2).unwrap();
        assert_abs_diff_eq!(r.nodes[0], -1.0 / 3f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(r.nodes[1], 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(r.weights[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.weights[1], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn degree_five_exactness() {
        let r = gauss_legendre::<f64>(3).unwrap();
        let v = r.integrate(-1.0, 1.0, |x| x.powi(4));
        assert_abs_diff_eq!(v, 0.4, epsilon = 1e-15);
    }

    #[test]
    fn truncated_gaussian_tail() {
        let r = gauss_legendre::<f64>(64).unwrap();
        let v = r.integrate(0.0, 8.0, |t| (-t * t).exp());
        assert_abs_diff_eq!(v, std::f64::consts::PI.sqrt() / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn weights_and_monomials() {
        for n in [1usize, 2, 5, 16, 64, 200, 512] {
            let r = gauss_legendre::<f64>(n).unwrap();
            let total: f64 = r.weights.iter().sum();
            assert_abs_diff_eq!(total, 2.0, epsilon = 1e-13);
            for i in 0..n {
                assert_eq!(r.nodes[i], -r.nodes[n - 1 - i]);
                assert!(r.weights[i] > 0.0);
            }
            for deg in (0..(2 * n).min(40)).step_by(2) {
                let v = r.integrate(-1.0, 1.0, |x| x.powi(deg as i32));
                assert_abs_diff_eq!(v, 2.0 / (deg as f64 + 1.0), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn order_out_of_range() {
        assert!(gauss_legendre::<f64>(0).is_err());
        assert!(gauss_legendre::<f64>(513).is_err());
    }

    #[test]
    fn single_precision_rule() {
        let r = gauss_legendre::<f32>(8).unwrap();
        let v = r.integrate(0.0, 1.0, |x| x * x);
        assert!((v - 1.0 / 3.0).abs() < 1e-6);
    }
}
