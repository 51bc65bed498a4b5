//! Log-kernel integrals `φ(u) = ∫_{-1}^{1} (1+ξ)^α (1-ξ)^{m-α} log|ξ - u| dξ`,
//! their closed form `μ_α(u) Θ_α(u) + P_{m+1}(u)`, the odd-`k` kernel `ψ_k`
//! and the even-`k` sign kernel `ψ`.

use serde::Serialize;

use crate::constants::{c_k_value, theta_k, theta_k_continued};
use crate::error::{domain, Error, Result};
use crate::numerics::{integrate_adaptive, Tolerance};
use crate::scalar::{from_i64, from_usize, lit, sign_pow, Scalar};

/// Parameters `(α, m)` of the general log kernel.
///
/// `m = -1` is admitted: it is the parameter set `α = -1/2` behind `ψ_1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelParams<T> {
    pub alpha: T,
    pub m: i32,
}

impl<T: Scalar> KernelParams<T> {
    pub fn new(alpha: T, m: i32) -> Result<Self> {
        if m < -1 {
            return Err(domain("m", m, "m must be at least -1"));
        }
        let upper = from_i64::<T>(i64::from(m) + 1);
        if !(alpha > -T::one() && alpha < upper) {
            return Err(domain("alpha", alpha, "alpha must satisfy -1 < alpha < m + 1"));
        }
        if (alpha - alpha.round()).abs() <= lit(1e-6) {
            return Err(domain("alpha", alpha, "alpha must not be within 1e-6 of an integer"));
        }
        Ok(Self { alpha, m })
    }

    /// Symmetric parameters `α = m − α = k/2 − 1`, `m = k − 2`, for odd `k`.
    pub fn for_odd_k(k: usize) -> Result<Self> {
        if k.is_multiple_of(2) {
            return Err(Error::Parity(format!("log kernel ψ_k needs odd k, got k = {k}")));
        }
        Self::new(from_usize::<T>(k) * lit(0.5) - T::one(), k as i32 - 2)
    }

    /// Exponent at `ξ = 1`.
    pub fn beta(&self) -> T {
        from_i64::<T>(i64::from(self.m)) - self.alpha
    }

    fn csc_term(&self) -> T {
        sign_pow::<T>(i64::from(self.m)) * T::PI() / (self.alpha * T::PI()).sin()
    }
}

/// Generalized binomial `C(a, p) = a (a-1) … (a-p+1) / p!`.
fn binom<T: Scalar>(a: T, p: usize) -> T {
    let mut c = T::one();
    for i in 0..p {
        c = c * (a - from_usize::<T>(i)) / from_usize::<T>(i + 1);
    }
    c
}

/// `λ_r = (1/r) Σ_{ℓ=0}^{m+1-r} (-1)^ℓ C(m-α, ℓ) C(α, m+1-r-ℓ)`, `r = 1..=m+1`.
pub fn lambda_coeffs<T: Scalar>(p: &KernelParams<T>) -> Vec<T> {
    let top = (p.m + 1).max(0) as usize;
    let beta = p.beta();
    (1..=top)
        .map(|r| {
            let s: T = (0..=top - r)
                .map(|l| sign_pow::<T>(l as i64) * binom(beta, l) * binom(p.alpha, top - r - l))
                .sum();
            s / from_usize(r)
        })
        .collect()
}

/// `μ_α(u)`: `-π cot απ` for `0 < u < 1`, `(-1)^m π csc απ` for `u > 1`.
pub fn mu_alpha<T: Scalar>(p: &KernelParams<T>, u: T) -> Result<T> {
    if !(u > T::zero()) {
        return Err(domain("u", u, "u must be positive"));
    }
    if u == T::one() {
        return Err(domain("u", u, "μ_α jumps at u = 1"));
    }
    let a = p.alpha * T::PI();
    Ok(if u < T::one() {
        -T::PI() * a.cos() / a.sin()
    } else {
        p.csc_term()
    })
}

fn tight<T: Scalar>() -> Tolerance<T> {
    let t = lit::<T>(1e-14).max(T::epsilon() * lit(16.0));
    Tolerance {
        abs: t * lit(100.0),
        rel: t,
        max_intervals: 8000,
    }
}

/// `∫_0^len d^γ h(d, ln d) dd` through `d = len·y^{1/(γ+1)}`, which absorbs
/// the power weight exactly: the result is `len^{γ+1}/(γ+1) ∫_0^1 h dy`.
/// `ln d` is supplied in the form `ln len + ln y/(γ+1)` so it stays finite
/// where `d` itself underflows.
fn power_weighted<T: Scalar>(h: impl Fn(T, T) -> T, len: T, gamma: T) -> Result<T> {
    if len <= T::zero() {
        return Ok(T::zero());
    }
    let b = gamma + T::one();
    let inv = T::one() / b;
    let ln_len = len.ln();
    let g = |y: T| {
        if y <= T::zero() {
            return T::zero();
        }
        h(len * y.powf(inv), ln_len + y.ln() * inv)
    };
    let q = integrate_adaptive(g, T::zero(), T::one(), tight())?;
    Ok(len.powf(b) * inv * q.value)
}

/// `∫_0^len h(d) dd` through `d = w²`, for `h` with a logarithmic singularity
/// at `d = 0`.
fn log_weighted<T: Scalar>(h: impl Fn(T) -> T, len: T) -> Result<T> {
    if len <= T::zero() {
        return Ok(T::zero());
    }
    let two = lit::<T>(2.0);
    let g = |w: T| {
        let d = w * w;
        if d == T::zero() {
            return T::zero();
        }
        h(d) * two * w
    };
    Ok(integrate_adaptive(g, T::zero(), len.sqrt(), tight())?.value)
}

/// `Θ_α(u)`: the non-negative integral of `(1+ξ)^α |1-ξ|^{m-α}` between
/// `1` and `u`, for any `u > 0`.
///
/// For `u >= 1` this is `∫_1^u`. The closed form also needs the mirror
/// integral `∫_u^1` for `0 < u < 1`, where it is multiplied by `-π cot απ`.
pub fn theta_alpha<T: Scalar>(p: &KernelParams<T>, u: T) -> Result<T> {
    if !(u > T::zero()) {
        return Err(domain("u", u, "Θ_α needs u > 0"));
    }
    let len = (u - T::one()).abs();
    let alpha = p.alpha;
    if u >= T::one() {
        power_weighted(|d, _| (lit::<T>(2.0) + d).powf(alpha), len, p.beta())
    } else {
        power_weighted(|d, _| (lit::<T>(2.0) - d).powf(alpha), len, p.beta())
    }
}

/// Brute-force quadrature of `φ(u) = ∫_{-1}^{1} (1+ξ)^α (1-ξ)^{m-α} log|ξ - u| dξ`.
///
/// The power singularities at `ξ = ±1` are absorbed by exact power
/// substitutions; for `u < 1` the logarithm is split at `ξ = u` and tamed
/// by `ξ = u ± w²`.
pub fn phi_oracle<T: Scalar>(p: &KernelParams<T>, u: T) -> Result<T> {
    if !(u > T::zero()) {
        return Err(domain("u", u, "φ is evaluated for u > 0"));
    }
    let (alpha, beta) = (p.alpha, p.beta());
    let one = T::one();
    let two = lit::<T>(2.0);
    // Left end: ξ = -1 + d.
    let left_piece = |hi: T| {
        power_weighted(
            |d: T, _| (two - d).powf(beta) * (one + u - d).ln(),
            hi + one,
            alpha,
        )
    };
    // Right end: ξ = 1 - d.
    let right_piece = |lo: T| {
        power_weighted(
            |d: T, ln_d: T| {
                let lg = if u == one {
                    ln_d
                } else {
                    (one - d - u).abs().ln()
                };
                (two - d).powf(alpha) * lg
            },
            one - lo,
            beta,
        )
    };
    let weight = |xi: T| (one + xi).powf(alpha) * (one - xi).powf(beta);
    if u >= one {
        return Ok(left_piece(T::zero())? + right_piece(T::zero())?);
    }
    // Logarithm at the interior point u: [-1, a] power, [a, u] and [u, c] log,
    // [c, 1] power.
    let a = (u - one) * lit(0.5);
    let c = (u + one) * lit(0.5);
    let mut total = left_piece(a)? + right_piece(c)?;
    total += log_weighted(|d: T| weight(u - d) * d.ln(), u - a)?;
    total += log_weighted(|d: T| weight(u + d) * d.ln(), c - u)?;
    Ok(total)
}

/// Coefficients of the polynomial part `P_{m+1}` together with `φ(1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolyCoeffs<T> {
    pub params: KernelParams<T>,
    /// `[λ_1, …, λ_{m+1}]`.
    pub coeffs: Vec<T>,
    pub phi_at_one: T,
}

impl<T: Scalar> PolyCoeffs<T> {
    /// Evaluates `λ_r` and `φ(1)` (one oracle quadrature) for `p`.
    pub fn new(p: &KernelParams<T>) -> Result<Self> {
        Ok(Self {
            params: *p,
            coeffs: lambda_coeffs(p),
            phi_at_one: phi_oracle(p, T::one())?,
        })
    }

    /// `P_{m+1}(u) = φ(1) − (−1)^m π csc απ Σ λ_r (u^r − 1)`.
    pub fn poly(&self, u: T) -> T {
        let mut s = T::zero();
        let mut pow = T::one();
        for &l in &self.coeffs {
            pow *= u;
            s += l * (pow - T::one());
        }
        self.phi_at_one - self.params.csc_term() * s
    }

    /// `t^q P_{m+1}(r/t)` expanded termwise, valid for `q >= m + 1` and `t > 0`
    /// without forming `r/t`.
    pub fn poly_scaled(&self, r: T, t: T, q: i32) -> T {
        let c = self.params.csc_term();
        let mut lead = self.phi_at_one;
        let mut acc = T::zero();
        let mut rp = T::one();
        for (j, &l) in self.coeffs.iter().enumerate() {
            rp *= r;
            lead += c * l;
            acc += l * rp * t.powi(q - j as i32 - 1);
        }
        lead * t.powi(q) - c * acc
    }

    /// `φ(u) = μ_α(u) Θ_α(u) + P_{m+1}(u)`.
    pub fn phi(&self, u: T) -> Result<T> {
        let p = &self.params;
        Ok(mu_alpha(p, u)? * theta_alpha(p, u)? + self.poly(u))
    }
}

/// Closed form of `φ(u)`; computes `φ(1)` once per call, use [`PolyCoeffs`]
/// to amortize it over many `u`.
pub fn phi_closed<T: Scalar>(p: &KernelParams<T>, u: T) -> Result<T> {
    PolyCoeffs::new(p)?.phi(u)
}

/// `ψ_k(u) = ∫_0^1 (1 - v²)^{k/2-1} log|u² - v²| dv` for odd `k`, in the
/// closed form `P_{k-1}(u)` (`u < 1`) and `P_{k-1}(u) + π(-1)^{(k-1)/2} Θ(u)`
/// (`u > 1`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogKernel<T> {
    pub k: usize,
    pub poly: PolyCoeffs<T>,
}

impl<T: Scalar> LogKernel<T> {
    pub fn new(k: usize) -> Result<Self> {
        let p = KernelParams::for_odd_k(k)?;
        Ok(Self {
            k,
            poly: PolyCoeffs::new(&p)?,
        })
    }

    /// `P_{k-1}(u)`, the part shared by both sides of `u = 1`.
    pub fn poly_part(&self, u: T) -> T {
        self.poly.poly(u)
    }

    /// `π(-1)^{(k-1)/2} Θ(u)` for `u >= 1`.
    pub fn theta_part(&self, u: T) -> Result<T> {
        Ok(T::PI() * sign_pow::<T>((self.k as i64 - 1) / 2) * theta_k(u, self.k)?)
    }

    pub fn eval(&self, u: T) -> Result<T> {
        if !(u > T::zero()) {
            return Err(domain("u", u, "ψ_k needs u > 0"));
        }
        if u < T::one() {
            Ok(self.poly_part(u))
        } else {
            Ok(self.poly_part(u) + self.theta_part(u)?)
        }
    }
}

/// `ψ_k(u)` for odd `k` (see [`LogKernel`]).
pub fn psi_k_closed<T: Scalar>(k: usize, u: T) -> Result<T> {
    if k.is_multiple_of(2) {
        return Err(Error::Parity(format!("ψ_k closed form needs odd k, got k = {k}")));
    }
    if u == T::one() {
        return Err(domain("u", u, "closed form excludes u = 1"));
    }
    LogKernel::new(k)?.eval(u)
}

/// Sign kernel `ψ(u) = ∫_0^1 sgn(v - u)(1 - v²)^{k/2-1} dv` for even `k`:
/// `-c_k + 2(-1)^{k/2} Θ(u)` on `(0, 1)` (polynomial continuation of `Θ`)
/// and `-c_k` for `u >= 1`.
pub fn psi_sign<T: Scalar>(k: usize, u: T) -> Result<T> {
    if k == 0 || k % 2 == 1 {
        return Err(Error::Parity(format!("sign kernel ψ needs even k, got k = {k}")));
    }
    if !(u > T::zero()) {
        return Err(domain("u", u, "ψ needs u > 0"));
    }
    let ck = c_k_value::<T>(k)?;
    if u >= T::one() {
        return Ok(-ck);
    }
    Ok(-ck + lit::<T>(2.0) * sign_pow::<T>(k as i64 / 2) * theta_k_continued(u, k)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate_endpoint_singular, quad_log_singular, Endpoint};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn params(alpha: f64, m: i32) -> KernelParams<f64> {
        KernelParams::new(alpha, m).unwrap()
    }

    #[test]
    fn param_validation() {
        assert!(KernelParams::new(0.5, 1).is_ok());
        assert!(KernelParams::new(1.0, 1).is_err());
        assert!(KernelParams::new(1.0 + 1e-7, 2).is_err());
        assert!(KernelParams::new(-1.2, 1).is_err());
        assert!(KernelParams::new(2.5, 1).is_err());
        assert!(KernelParams::new(-0.5, -1).is_ok());
        assert!(KernelParams::new(-0.5, -2).is_err());
    }

    #[test]
    fn lambda_desk_values() {
        let l = lambda_coeffs(&params(0.5, 1));
        assert_abs_diff_eq!(l[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(l[1], 0.5, epsilon = 1e-15);
        assert_eq!(lambda_coeffs(&params(0.5, 0)), vec![1.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let m = rng.random_range(0..4);
            let alpha = rng.random_range(-0.95..(m as f64 + 0.95));
            if (alpha - alpha.round()).abs() < 0.01 {
                continue;
            }
            let l = lambda_coeffs(&params(alpha, m));
            assert_eq!(l.len(), m as usize + 1);
            assert_abs_diff_eq!(l[m as usize], 1.0 / (m as f64 + 1.0), epsilon = 1e-13);
        }
        assert!(lambda_coeffs(&params(-0.5, -1)).is_empty());
    }

    #[test]
    fn symmetric_lambda_has_even_support() {
        for m in [1, 3] {
            let p = params(m as f64 / 2.0, m);
            for (i, l) in lambda_coeffs(&p).iter().enumerate() {
                if i % 2 == 0 {
                    assert_abs_diff_eq!(*l, 0.0, epsilon = 1e-10);
                }
            }
        }
    }

    #[test]
    fn mu_desk_values() {
        assert_abs_diff_eq!(mu_alpha(&params(0.5, 1), 0.3).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(mu_alpha(&params(0.5, 1), 2.0).unwrap(), -PI, epsilon = 1e-15);
        assert_abs_diff_eq!(mu_alpha(&params(0.5, 2), 2.0).unwrap(), PI, epsilon = 1e-15);
        assert!(mu_alpha(&params(0.5, 2), 1.0).is_err());
    }

    #[test]
    fn theta_alpha_desk_values() {
        let p = params(0.5, 1);
        assert_eq!(theta_alpha(&p, 1.0).unwrap(), 0.0);
        let exact = 3f64.sqrt() - 0.5 * (2.0 + 3f64.sqrt()).ln();
        assert_abs_diff_eq!(theta_alpha(&p, 2.0).unwrap(), exact, epsilon = 1e-12);
        assert_abs_diff_eq!(theta_alpha(&p, 2.0).unwrap(), 1.073_571_859_106_469, epsilon = 1e-12);
        // m = 0: ∫_1^2 √((1+ξ)/(ξ-1)) dξ via an independent endpoint treatment.
        let q = integrate_endpoint_singular(
            |xi: f64, d: f64| ((1.0 + xi) / d).sqrt(),
            1.0,
            2.0,
            Endpoint::Lower,
            Tolerance::new(1e-14, 1e-14),
        )
        .unwrap();
        assert_abs_diff_eq!(theta_alpha(&params(0.5, 0), 2.0).unwrap(), q, epsilon = 1e-10);
        // Antiderivative √(ξ²−1) + arccosh ξ.
        assert_abs_diff_eq!(q, 3f64.sqrt() + 2f64.acosh(), epsilon = 1e-10);
    }

    #[test]
    fn hilbert_identity_fixes_quadratic() {
        let p = params(0.5, 1);
        let pc = PolyCoeffs::new(&p).unwrap();
        let phi0 = phi_oracle(&p, 1e-300f64.max(f64::MIN_POSITIVE)).unwrap();
        for u in [0.2, 0.5, 0.9] {
            let closed = pc.phi(u).unwrap();
            assert_abs_diff_eq!(closed - phi0, PI * u * u / 2.0, epsilon = 1e-8);
            assert_abs_diff_eq!(closed, phi_oracle(&p, u).unwrap(), epsilon = 1e-8);
        }
    }

    #[test]
    fn oracle_sweep() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut count = 0;
        while count < 50 {
            let m = rng.random_range(0..4);
            let alpha = rng.random_range(-0.97..(m as f64 + 0.97));
            if (alpha - alpha.round()).abs() < 0.03 {
                continue;
            }
            let u = if rng.random_bool(0.5) {
                rng.random_range(0.02..0.98)
            } else {
                rng.random_range(1.02..4.0)
            };
            let p = params(alpha, m);
            let closed = phi_closed(&p, u).unwrap();
            let oracle = phi_oracle(&p, u).unwrap();
            assert!(
                (closed - oracle).abs() < 1e-7,
                "alpha={alpha} m={m} u={u}: {closed} vs {oracle}"
            );
            count += 1;
        }
    }

    #[test]
    fn continuity_at_one() {
        let p = params(0.3, 2);
        let pc = PolyCoeffs::new(&p).unwrap();
        let phi = |u: f64| pc.phi(u).unwrap();
        // The gap closes linearly (it is the slope times 2ε).
        let gaps: Vec<f64> = [1e-2, 1e-3, 1e-4, 1e-5]
            .iter()
            .map(|&e| (phi(1.0 - e) - phi(1.0 + e)) / e)
            .collect();
        for w in gaps.windows(2) {
            assert!((w[0] - w[1]).abs() < 1e-2 * w[1].abs().max(1.0));
        }
        // One-sided limits by linear extrapolation agree with each other and φ(1).
        let e = 1e-5;
        let left = 2.0 * phi(1.0 - e) - phi(1.0 - 2.0 * e);
        let right = 2.0 * phi(1.0 + e) - phi(1.0 + 2.0 * e);
        assert!((left - right).abs() < 1e-6);
        assert!((left - pc.phi_at_one).abs() < 1e-6);
    }

    #[test]
    fn symmetric_phi_is_even_on_unit_interval() {
        use crate::numerics::linalg::{least_squares, Mat};
        let p = params(1.5, 3);
        let pc = PolyCoeffs::new(&p).unwrap();
        let us: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
        let vals: Vec<f64> = us.iter().map(|&u| pc.phi(u).unwrap()).collect();
        // Degree 4 on (0, 1): fifth divided differences vanish.
        let mut dd = vals.clone();
        for level in 1..=5 {
            for i in 0..us.len() - level {
                dd[i] = (dd[i + 1] - dd[i]) / (us[i + level] - us[i]);
            }
        }
        assert!(dd[0].abs() < 1e-8);
        // Odd coefficients of the fitted quartic vanish.
        let cols: Vec<Vec<f64>> = (0..5).map(|j| us.iter().map(|u| u.powi(j)).collect()).collect();
        let (c, _) = least_squares(&Mat::from_columns(&cols), &vals).unwrap();
        assert!(c[1].abs() < 1e-8 && c[3].abs() < 1e-8, "{c:?}");
    }

    #[test]
    fn folding_identity() {
        let p = params(0.5, 1);
        let u = 0.3;
        let phi = phi_oracle(&p, u).unwrap();
        let folded = quad_log_singular(|v: f64| (1.0 - v * v).sqrt() * (v * v - u * u).abs().ln(), 0.0, 1.0, u)
            .unwrap();
        assert_abs_diff_eq!(phi, folded, epsilon = 1e-9);
        assert_abs_diff_eq!(psi_k_closed(3, u).unwrap(), folded, epsilon = 1e-8);
    }

    #[test]
    fn psi_one_desk_values() {
        assert_abs_diff_eq!(psi_k_closed(1, 0.5).unwrap(), -PI * 2f64.ln(), epsilon = 1e-8);
        assert_abs_diff_eq!(psi_k_closed(1, 0.5).unwrap(), -2.177_586_090_303_602, epsilon = 1e-8);
        let want = PI * ((2.0 + 3f64.sqrt()) / 2.0).ln();
        assert_abs_diff_eq!(psi_k_closed(1, 2.0).unwrap(), want, epsilon = 1e-8);
        assert_abs_diff_eq!(psi_k_closed(1, 2.0).unwrap(), 1.959_759_163_762_466_7, epsilon = 1e-8);
        assert!(psi_k_closed(2, 0.5f64).is_err());
        assert!(psi_k_closed(1, 1.0f64).is_err());
    }

    #[test]
    fn psi_k_structure() {
        // ψ_k(u) − P_{k-1}(u) for u > 1 is exactly the Θ term, and P is the
        // same polynomial that reproduces ψ_k below 1.
        let kern = LogKernel::<f64>::new(5).unwrap();
        for (lo, hi) in [(0.4, 1.6), (0.8, 3.0)] {
            let oracle = |u: f64| {
                quad_log_singular(
                    |v: f64| (1.0 - v * v).powf(1.5) * (u * u - v * v).abs().ln(),
                    0.0,
                    1.0,
                    u.min(1.0),
                )
                .unwrap()
            };
            assert_abs_diff_eq!(kern.eval(lo).unwrap(), oracle(lo), epsilon = 1e-8);
            assert_abs_diff_eq!(kern.eval(hi).unwrap(), oracle(hi), epsilon = 1e-8);
            let theta = 5f64.mul_add(0.0, 0.0) + PI * theta_k(hi, 5).unwrap();
            assert_abs_diff_eq!(oracle(hi) - kern.poly_part(hi), theta, epsilon = 1e-8);
        }
        for (i, l) in kern.poly.coeffs.iter().enumerate() {
            if i % 2 == 0 {
                assert_abs_diff_eq!(*l, 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn psi_sign_desk_values() {
        assert_abs_diff_eq!(psi_sign(2, 0.25).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(psi_sign(2, 3.0).unwrap(), -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(psi_sign(2, 1.0 - 1e-12).unwrap(), -1.0, epsilon = 1e-11);
        assert_abs_diff_eq!(psi_sign(2, 1.0 + 1e-12).unwrap(), -1.0, epsilon = 1e-11);
        assert!(psi_sign(3, 0.5f64).is_err());
    }

    #[test]
    fn psi_sign_matches_sgn_quadrature() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let k = 2 * rng.random_range(1..5usize);
            let u: f64 = rng.random_range(0.01..1.5);
            let w = |v: f64| (1.0 - v * v).powf(k as f64 / 2.0 - 1.0);
            let tol = Tolerance::new(1e-14, 1e-14);
            let split = u.min(1.0);
            let below = integrate_adaptive(w, 0.0, split, tol).unwrap().value;
            let above = integrate_adaptive(w, split, 1.0, tol).unwrap().value;
            assert_abs_diff_eq!(psi_sign(k, u).unwrap(), above - below, epsilon = 1e-9);
        }
    }

    #[test]
    fn single_precision_kernel() {
        let v: f32 = psi_sign(2, 0.25f32).unwrap();
        assert!((v - 0.5).abs() < 1e-6);
        let l = lambda_coeffs(&KernelParams::<f32>::new(0.5, 1).unwrap());
        assert!((l[1] - 0.5).abs() < 1e-6);
    }
}
