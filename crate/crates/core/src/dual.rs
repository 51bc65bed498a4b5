//! Shifted dual transforms `R*_r`, the weighted-dual identity and the
//! operators `L*_r`, `L̃*_r` and `Λ_r`, all reduced to one-dimensional
//! integrals against (tilde) spherical means.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::constants::{c_k_value, lambda_weight, sphere_area, theta_k, theta_k_continued};
use crate::error::{domain, Error, Result};
use crate::geometry::{distance_rho, geodesic_at_distance, haar_rotation_rng, Geodesic, Point, Space, SpaceKind};
use crate::kernels::LogKernel;
use crate::numerics::{
    integrate_adaptive, integrate_endpoint_singular, integrate_semi_infinite, Endpoint, QuadConfig, RadialProfile,
    Tolerance,
};
use crate::phantom::ScalarField;
use crate::scalar::{dot, from_usize, lit, sign_pow, Scalar};
use crate::transforms::{check_field, radon_forward, tilde_at, Sections};

/// Samples per parallel Monte Carlo chunk; each chunk owns one ChaCha stream.
const MC_CHUNK: usize = 256;

/// Settings for the dual operators.
#[derive(Debug, Clone)]
pub struct DualConfig<T> {
    /// Monte Carlo sample count (at least 100).
    pub mc_samples: usize,
    pub quad: QuadConfig<T>,
    /// Upper limit replacing `∞` in the `t`-integrals; derived from the
    /// field's decay scale when `None`.
    pub truncation: Option<T>,
    pub seed: u64,
}

impl<T: Scalar> Default for DualConfig<T> {
    fn default() -> Self {
        Self {
            mc_samples: 10_000,
            quad: QuadConfig::default(),
            truncation: None,
            seed: 0,
        }
    }
}

impl<T: Scalar> DualConfig<T> {
    fn validate(&self) -> Result<()> {
        if self.mc_samples < 100 {
            return Err(domain("mc_samples", self.mc_samples as f64, "at least 100 samples are required"));
        }
        if let Some(t) = self.truncation {
            if !(t > T::zero()) {
                return Err(domain("truncation", t, "truncation must be positive"));
            }
        }
        Ok(())
    }
}

/// Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate<T> {
    pub mean: T,
    pub std_err: T,
    pub samples: usize,
}

impl<T: Scalar> McEstimate<T> {
    /// `|mean − value|` in units of the standard error (0 when both vanish).
    pub fn z_score(&self, value: T) -> T {
        let gap = (self.mean - value).abs();
        if gap == T::zero() {
            T::zero()
        } else {
            gap / self.std_err
        }
    }
}

/// Runs `sample` over `count` draws split into deterministic per-chunk
/// ChaCha streams and reduces in chunk order.
fn monte_carlo<T, F>(count: usize, seed: u64, sample: F) -> Result<McEstimate<T>>
where
    T: Scalar,
    F: Fn(&mut ChaCha8Rng) -> Result<T> + Sync,
{
    let chunks = count.div_ceil(MC_CHUNK);
    let parts = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = MC_CHUNK.min(count - c * MC_CHUNK);
            (0..len).map(|_| sample(&mut rng)).collect::<Result<Vec<T>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let nf = from_usize::<T>(count);
    let mean = compensated_sum(parts.iter().flatten().copied()) / nf;
    let var = compensated_sum(parts.iter().flatten().map(|&v| (v - mean) * (v - mean))) / from_usize::<T>(count - 1);
    Ok(McEstimate {
        mean,
        std_err: (var / nf).sqrt(),
        samples: count,
    })
}

/// Neumaier summation.
fn compensated_sum<T: Scalar>(values: impl Iterator<Item = T>) -> T {
    let (mut sum, mut comp) = (T::zero(), T::zero());
    for v in values {
        let t = sum + v;
        comp += if sum.abs() >= v.abs() { (sum - t) + v } else { (v - t) + sum };
        sum = t;
    }
    sum + comp
}

/// Sub-seed for the `index`-th independent stream derived from `seed`.
pub fn sub_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn check_r<T: Scalar>(space: &Space, r: T) -> Result<()> {
    if !(r >= T::zero()) {
        return Err(domain("r", r, "r must be non-negative"));
    }
    if space.kind == SpaceKind::Sphere && r >= T::one() {
        return Err(domain("r", r, "sphere requires r < 1"));
    }
    Ok(())
}

/// `(R*_r φ)(x)` by averaging `φ` over random submanifolds at distance `r`
/// from `x`: `ξ = geodesic_at_distance(x, r, γ)` with Haar `γ`.
pub fn dual_shifted_mc<T, F>(space: &Space, phi: F, x: &Point<T>, r: T, cfg: &DualConfig<T>) -> Result<McEstimate<T>>
where
    T: Scalar,
    F: Fn(&Geodesic<T>) -> Result<T> + Sync,
{
    cfg.validate()?;
    check_r(space, r)?;
    monte_carlo(cfg.mc_samples, cfg.seed, |rng| {
        let g = haar_rotation_rng(space, rng);
        phi(&geodesic_at_distance(space, x, r, &g)?)
    })
}

/// `Rf(ξ)`: the phantom's closed form when it has one, quadrature otherwise.
pub fn transform_value<T: Scalar>(space: &Space, f: &ScalarField<T>, xi: &Geodesic<T>, quad: &QuadConfig<T>) -> Result<T> {
    match f.exact_radon(space, xi) {
        Some(v) => Ok(v),
        None => radon_forward(space, f, xi, quad),
    }
}

/// Upper limit of the `t`-integrals (the tilde-mean variable).
fn upper_t<T: Scalar>(space: &Space, f: &ScalarField<T>, x: &Point<T>, cfg: &DualConfig<T>) -> Result<T> {
    if space.kind == SpaceKind::Sphere {
        return Ok(T::one());
    }
    if let Some(t) = cfg.truncation {
        return Ok(t);
    }
    if !f.decay_scale.is_finite() {
        return Err(Error::NotIntegrable {
            tail: f64::INFINITY,
            limit: crate::transforms::TAIL_LIMIT,
        });
    }
    let offset = match &f.center {
        Some(c) => Point::<T>::new(space, c.clone())?.distance(space, x)?,
        None => T::zero(),
    };
    let reach = f.decay_scale + offset;
    Ok(match space.kind {
        SpaceKind::Hyperbolic => reach.sinh(),
        _ => reach,
    })
}

/// `∫_lo^hi M̃_t f(x) k(t) dt`. On the sphere the integral is taken in
/// `t = sin β`, where `M̃_t dt = M_{cos β} dβ` removes the `(1 − t²)^{-1/2}`
/// endpoint factor.
fn mean_integral<T: Scalar>(
    space: &Space,
    sec: &Sections<'_, T>,
    lo: T,
    hi: T,
    kern: impl Fn(T) -> T,
    tol: Tolerance<T>,
) -> Result<T> {
    if hi <= lo {
        return Ok(T::zero());
    }
    Ok(match space.kind {
        SpaceKind::Euclidean => integrate_semi_infinite(|t| sec.average(T::one(), t) * kern(t), lo, hi, tol)?.value,
        SpaceKind::Hyperbolic => {
            integrate_semi_infinite(
                |t| {
                    let c = (T::one() + t * t).sqrt();
                    sec.average(c, t) / c * kern(t)
                },
                lo,
                hi,
                tol,
            )?
            .value
        }
        SpaceKind::Sphere => {
            let (b0, b1) = (lo.asin(), hi.min(T::one()).asin());
            integrate_adaptive(
                |b| {
                    let (s, c) = b.sin_cos();
                    sec.average(c, s) * kern(s)
                },
                b0,
                b1,
                tol,
            )?
            .value
        }
    })
}

/// [`mean_integral`] on `[0, r]` for kernels with a weak singularity at
/// `t = r`.
fn mean_integral_to_r<T: Scalar>(
    space: &Space,
    sec: &Sections<'_, T>,
    r: T,
    kern: impl Fn(T) -> T,
    tol: Tolerance<T>,
) -> Result<T> {
    if r == T::zero() {
        return Ok(T::zero());
    }
    match space.kind {
        SpaceKind::Sphere => integrate_endpoint_singular(
            |b: T, _| {
                let (s, c) = b.sin_cos();
                sec.average(c, s) * kern(s)
            },
            T::zero(),
            r.asin(),
            Endpoint::Upper,
            tol,
        ),
        _ => integrate_endpoint_singular(
            |t: T, _| tilde_at(space, sec, t).unwrap_or(T::nan()) * kern(t),
            T::zero(),
            r,
            Endpoint::Upper,
            tol,
        ),
    }
}

/// `λ_X(r) (R*_r Rf)(x)` from the tilde means with `t = √(r² + w²)`.
fn weighted_shifted<T: Scalar>(space: &Space, sec: &Sections<'_, T>, r: T, upper: T, cfg: &DualConfig<T>) -> Result<T> {
    let k = space.k;
    let km1 = k as i32 - 1;
    let area = sphere_area::<T>(k as i64 - 1)?;
    let tol = cfg.quad.tol;
    match space.kind {
        SpaceKind::Sphere => {
            // 1 − t² = w_max² − w² = d (2 w_max − d) with d = w_max − w.
            let wm = (T::one() - r * r).sqrt();
            let v = integrate_endpoint_singular(
                |w: T, d: T| {
                    let s = (d * (wm + wm - d)).sqrt();
                    let t = (r * r + w * w).sqrt();
                    sec.average(s, t) / s * w.powi(km1)
                },
                T::zero(),
                wm,
                Endpoint::Upper,
                tol,
            )?;
            Ok(lit::<T>(2.0) * area * v)
        }
        _ => {
            if upper <= r {
                return Ok(T::zero());
            }
            let wmax = (upper * upper - r * r).sqrt();
            let v = integrate_semi_infinite(
                |w| {
                    let t = (r * r + w * w).sqrt();
                    tilde_at(space, sec, t).unwrap_or(T::nan()) * w.powi(km1)
                },
                T::zero(),
                wmax,
                tol,
            )?;
            Ok(area * v.value)
        }
    }
}

/// `(R*_r Rf)(x)` evaluated from the spherical means of `f` about `x`.
pub fn dual_shifted_mean<T: Scalar>(
    space: &Space,
    f: &ScalarField<T>,
    x: &Point<T>,
    r: T,
    cfg: &DualConfig<T>,
) -> Result<T> {
    check_field(space, f)?;
    check_r(space, r)?;
    let sec = Sections::new(space, f, x, &cfg.quad)?;
    let upper = upper_t(space, f, x, cfg)?;
    Ok(weighted_shifted(space, &sec, r, upper, cfg)? / lambda_weight(space, r)?)
}

/// `λ_X(r) (R*_r Rf)(x)`, the quantity differentiated in the even-`k`
/// weighted-dual inversion.
pub fn weighted_dual_mean<T: Scalar>(
    space: &Space,
    f: &ScalarField<T>,
    x: &Point<T>,
    r: T,
    cfg: &DualConfig<T>,
) -> Result<T> {
    check_field(space, f)?;
    check_r(space, r)?;
    let sec = Sections::new(space, f, x, &cfg.quad)?;
    weighted_shifted(space, &sec, r, upper_t(space, f, x, cfg)?, cfg)
}

/// A radial weight `a(ρ)` with the points where it fails to be smooth.
#[derive(Clone)]
pub struct RadialWeight<T> {
    name: String,
    eval: Arc<dyn Fn(T) -> T + Send + Sync>,
    /// Kinks and jumps of `a`, used to split the `r`-integral.
    pub breakpoints: Vec<T>,
}

impl<T> fmt::Debug for RadialWeight<T>
where
    T: fmt::Debug,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialWeight")
            .field("name", &self.name)
            .field("breakpoints", &self.breakpoints)
            .finish_non_exhaustive()
    }
}

impl<T: Scalar> RadialWeight<T> {
    pub fn new(name: impl Into<String>, eval: impl Fn(T) -> T + Send + Sync + 'static, breakpoints: Vec<T>) -> Self {
        Self {
            name: name.into(),
            eval: Arc::new(eval),
            breakpoints,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn eval(&self, rho: T) -> T {
        (self.eval)(rho)
    }

    /// `exp(−ρ²)`.
    pub fn gaussian() -> Self {
        Self::new("gaussian", |r: T| (-r * r).exp(), Vec::new())
    }

    /// `a ≡ 0`.
    pub fn zero() -> Self {
        Self::new("zero", |_| T::zero(), Vec::new())
    }

    /// `ρ^{k+1−n} sgn(ρ² − r₀²)`, the kernel of `L*_{r₀}`.
    pub fn sign_kernel(space: &Space, r0: T) -> Self {
        let p = space.k as i32 + 1 - space.n as i32;
        Self::new(
            format!("sign(r0={r0})"),
            move |r: T| {
                let s = r * r - r0 * r0;
                let sg = if s > T::zero() {
                    T::one()
                } else if s < T::zero() {
                    -T::one()
                } else {
                    T::zero()
                };
                r.powi(p) * sg
            },
            vec![r0],
        )
    }
}

/// Both sides of the weighted-dual identity
/// `∫_Ξ φ(ξ) a(ρ(x, ξ)) dξ = ∫ w_X(r) a(r) (R*_r φ)(x) dr` for `φ = Rf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightedDual<T> {
    /// Monte Carlo integral over `Ξ`.
    pub lhs: McEstimate<T>,
    /// Quadrature of the radial formula.
    pub rhs: T,
}

/// Orthonormal `count`-frame from Gaussian vectors in `R^dim`.
fn random_frame<T: Scalar, R: Rng + ?Sized>(dim: usize, count: usize, rng: &mut R) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = Vec::with_capacity(count);
    while out.len() < count {
        let mut v: Vec<T> = (0..dim).map(|_| lit::<T>(rng.sample::<f64, _>(StandardNormal))).collect();
        for _ in 0..2 {
            for c in &out {
                let p = dot(&v, c);
                v.iter_mut().zip(c).for_each(|(a, &b)| *a -= p * b);
            }
        }
        let nv = dot(&v, &v).sqrt();
        if nv > lit(1e-6) {
            out.push(v.into_iter().map(|a| a / nv).collect());
        }
    }
    out
}

/// Draws `ξ ∈ Ξ` from a proposal independent of the distance to `x` and
/// returns it with its importance weight `dξ / dq`.
fn sample_submanifold<T: Scalar>(space: &Space, anchor: &[T], rng: &mut ChaCha8Rng) -> Result<(Geodesic<T>, T)> {
    let (n, k) = (space.n, space.k);
    match space.kind {
        SpaceKind::Euclidean => {
            // ζ Haar on the Grassmannian; u Gaussian in ζ⊥ about the
            // projection of the anchor.
            let frame: Vec<Vec<T>> = random_frame(n, n, rng);
            let (dirs, normals) = frame.split_at(k);
            let mut offset = vec![T::zero(); n];
            let mut z2 = T::zero();
            for nu in normals {
                let z = lit::<T>(rng.sample::<f64, _>(StandardNormal));
                z2 += z * z;
                let c = dot(anchor, nu) + z;
                offset.iter_mut().zip(nu).for_each(|(o, &v)| *o += c * v);
            }
            let m = from_usize::<T>(n - k);
            let log_pdf = -z2 * lit(0.5) - m * lit(0.5) * T::TAU().ln();
            Ok((
                Geodesic::Plane {
                    directions: dirs.to_vec(),
                    offset,
                },
                (-log_pdf).exp(),
            ))
        }
        SpaceKind::Sphere => Ok((
            Geodesic::GreatSphere {
                basis: random_frame(n + 1, k + 1, rng),
            },
            T::one(),
        )),
        SpaceKind::Hyperbolic => {
            // Foot at distance θ from the base point in direction ω ⊥ ζ,
            // θ ~ λ e^{−λθ}; invariant density σ_{n−k−1} sinh^{n−k−1}θ cosh^kθ.
            let rate = lit::<T>(3.0);
            let frame: Vec<Vec<T>> = random_frame(n, n, rng);
            let (dirs, normals) = frame.split_at(k);
            let mut omega = vec![T::zero(); n];
            for nu in normals {
                let z = lit::<T>(rng.sample::<f64, _>(StandardNormal));
                omega.iter_mut().zip(nu).for_each(|(o, &v)| *o += z * v);
            }
            let no = dot(&omega, &omega).sqrt();
            let u: T = lit(rng.random::<f64>());
            let theta = -(T::one() - u).ln() / rate;
            let (sh, ch) = (theta.sinh(), theta.cosh());
            let mut foot: Vec<T> = omega.iter().map(|&o| sh * o / no).collect();
            foot.push(ch);
            let tangents = dirs
                .iter()
                .map(|d| {
                    let mut v = d.clone();
                    v.push(T::zero());
                    v
                })
                .collect();
            let dens = sphere_area::<T>((n - k - 1) as i64)? * sh.powi((n - k - 1) as i32) * ch.powi(k as i32);
            let q = rate * (-rate * theta).exp();
            Ok((Geodesic::Hyperbolic { foot, tangents }, dens / q))
        }
    }
}

/// Radial density `w_X(r)` of the weighted-dual formula divided by
/// `λ_X(r)`: `σ_{n−k−1} r^{n−k−1}` times `σ_k / σ_n` on the sphere.
fn radial_density<T: Scalar>(space: &Space, r: T) -> Result<T> {
    let (n, k) = (space.n, space.k);
    let base = sphere_area::<T>((n - k - 1) as i64)? * r.powi((n - k - 1) as i32);
    Ok(match space.kind {
        SpaceKind::Sphere => base * sphere_area::<T>(k as i64)? / sphere_area::<T>(n as i64)?,
        _ => base,
    })
}

/// Left side by Monte Carlo over `Ξ` with the product measure, right side by
/// nested quadrature of the radial formula, for `φ = Rf`.
pub fn weighted_dual_both_sides<T: Scalar>(
    space: &Space,
    f: &ScalarField<T>,
    a: &RadialWeight<T>,
    x: &Point<T>,
    cfg: &DualConfig<T>,
) -> Result<WeightedDual<T>> {
    check_field(space, f)?;
    cfg.validate()?;
    let anchor = f.center.clone().unwrap_or_else(|| Point::<T>::base(space).into_coords());
    let lhs = monte_carlo(cfg.mc_samples, cfg.seed, |rng| {
        let (xi, w) = sample_submanifold(space, &anchor, rng)?;
        let av = a.eval(distance_rho(space, x, &xi)?);
        if av == T::zero() {
            return Ok(T::zero());
        }
        Ok(transform_value(space, f, &xi, &cfg.quad)? * av * w)
    })?;

    let sec = Sections::new(space, f, x, &cfg.quad)?;
    let upper = upper_t(space, f, x, cfg)?;
    let r_max = match space.kind {
        SpaceKind::Sphere => T::one(),
        _ => upper,
    };
    let mut cuts = vec![T::zero()];
    cuts.extend(a.breakpoints.iter().copied().filter(|&b| b > T::zero() && b < r_max));
    cuts.push(r_max);
    let integrand = |r: T| -> T {
        let av = a.eval(r);
        if av == T::zero() {
            return T::zero();
        }
        let dens = radial_density(space, r).unwrap_or(T::nan());
        dens * av * weighted_shifted(space, &sec, r, upper, cfg).unwrap_or(T::nan())
    };
    let mut rhs = T::zero();
    for w in cuts.windows(2) {
        rhs += match space.kind {
            // (1 − r²)^{(k−1)/2} R*_r stays bounded but loses smoothness at r = 1.
            SpaceKind::Sphere if w[1] == T::one() => {
                integrate_endpoint_singular(|r, _| integrand(r), w[0], w[1], Endpoint::Upper, cfg.quad.tol)?
            }
            _ => integrate_semi_infinite(integrand, w[0], w[1], cfg.quad.tol)?.value,
        };
    }
    Ok(WeightedDual { lhs, rhs })
}

/// Prefactor of the `L*`, `L̃*` reductions: `σ_{n−k−1} σ_{k−1}`, with the
/// extra `2 σ_k / σ_n` on the sphere.
fn mader_prefactor<T: Scalar>(space: &Space) -> Result<T> {
    let (n, k) = (space.n as i64, space.k as i64);
    let base = sphere_area::<T>(n - k - 1)? * sphere_area::<T>(k - 1)?;
    Ok(match space.kind {
        SpaceKind::Sphere => lit::<T>(2.0) * base * sphere_area::<T>(k)? / sphere_area::<T>(n)?,
        _ => base,
    })
}

struct Reduction<'a, T> {
    space: Space,
    sec: Sections<'a, T>,
    upper: T,
    pref: T,
    tol: Tolerance<T>,
}

impl<'a, T: Scalar> Reduction<'a, T> {
    fn new(space: &Space, f: &'a ScalarField<T>, x: &Point<T>, cfg: &DualConfig<T>) -> Result<Self> {
        check_field(space, f)?;
        Ok(Self {
            space: *space,
            sec: Sections::new(space, f, x, &cfg.quad)?,
            upper: upper_t(space, f, x, cfg)?,
            pref: mader_prefactor(space)?,
            tol: cfg.quad.tol,
        })
    }

    /// `L*_r` for even `k`: `∫ M̃_t t^k ψ(r/t) dt` with `ψ = −c_k` for
    /// `t < r`.
    fn l_star(&self, r: T) -> Result<T> {
        let k = self.space.k;
        let ck = c_k_value::<T>(k)?;
        let sgn = lit::<T>(2.0) * sign_pow::<T>(k as i64 / 2);
        let kp = k as i32;
        let inner = mean_integral(&self.space, &self.sec, T::zero(), r.min(self.upper), |t| -ck * t.powi(kp), self.tol)?;
        let outer = mean_integral(
            &self.space,
            &self.sec,
            r,
            self.upper,
            |t| {
                let u = if r == T::zero() { T::zero() } else { r / t };
                t.powi(kp) * (-ck + sgn * theta_k_continued(u, k).unwrap_or(T::nan()))
            },
            self.tol,
        )?;
        Ok(self.pref * (inner + outer))
    }

    /// `L̃*_r` for odd `k`: `A + B(r)` with the log term and the polynomial
    /// part on `[0, T]` and the `Θ` part on `[0, r]`.
    fn l_tilde_star(&self, r: T, kernel: &LogKernel<T>) -> Result<T> {
        let k = self.space.k;
        let ck = c_k_value::<T>(k)?;
        let kp = k as i32;
        let two_ck = ck + ck;
        let smooth = |t: T| t.powi(kp) * two_ck * t.ln() + kernel.poly.poly_scaled(r, t, kp);
        let mut total = if r > T::zero() && r < self.upper {
            mean_integral(&self.space, &self.sec, T::zero(), r, smooth, self.tol)?
                + mean_integral(&self.space, &self.sec, r, self.upper, smooth, self.tol)?
        } else {
            mean_integral(&self.space, &self.sec, T::zero(), self.upper, smooth, self.tol)?
        };
        let sign = T::PI() * sign_pow::<T>((k as i64 - 1) / 2);
        total += sign
            * mean_integral_to_r(
                &self.space,
                &self.sec,
                r,
                |t| t.powi(kp) * theta_k((r / t).max(T::one()), k).unwrap_or(T::nan()),
                self.tol,
            )?;
        Ok(self.pref * total)
    }

    /// `Λ_r = r^k ∫_0^{π/2} M̃_{r sin ω} cos^{k−1}ω sin ω dω`.
    fn lambda(&self, r: T, k: usize) -> Result<T> {
        if r == T::zero() {
            return Ok(T::zero());
        }
        let v = integrate_adaptive(
            |w| {
                let (s, c) = w.sin_cos();
                tilde_at(&self.space, &self.sec, r * s).unwrap_or(T::nan()) * c.powi(k as i32 - 1) * s
            },
            T::zero(),
            T::FRAC_PI_2(),
            self.tol,
        )?;
        Ok(r.powi(k as i32) * v.value)
    }
}

fn need_parity(space: &Space, even: bool, what: &str) -> Result<()> {
    if space.k_is_even() != even {
        return Err(Error::Parity(format!(
            "{what} needs {} k, got k = {}",
            if even { "even" } else { "odd" },
            space.k
        )));
    }
    Ok(())
}

/// `(L*_r Rf)(x) = ∫_Ξ Rf(ξ) ρ^{k+1−n} sgn(ρ² − r²) dξ` for even `k`.
#[doc(alias = "L_star")]
pub fn l_star<T: Scalar>(space: &Space, f: &ScalarField<T>, x: &Point<T>, r: T, cfg: &DualConfig<T>) -> Result<T> {
    need_parity(space, true, "L*_r")?;
    check_r(space, r)?;
    Reduction::new(space, f, x, cfg)?.l_star(r)
}

/// `(L̃*_r Rf)(x) = ∫_Ξ Rf(ξ) ρ^{k+1−n} log|ρ² − r²| dξ` for odd `k`.
#[doc(alias = "L_tilde_star")]
pub fn l_tilde_star<T: Scalar>(space: &Space, f: &ScalarField<T>, x: &Point<T>, r: T, cfg: &DualConfig<T>) -> Result<T> {
    need_parity(space, false, "L̃*_r")?;
    check_r(space, r)?;
    let kernel = LogKernel::new(space.k)?;
    Reduction::new(space, f, x, cfg)?.l_tilde_star(r, &kernel)
}

/// `(Λ_r f)(x) = ∫_0^r M̃_t f(x) (r² − t²)^{k/2−1} t dt`.
#[doc(alias = "Lambda_r")]
pub fn lambda_r<T: Scalar>(
    space: &Space,
    f: &ScalarField<T>,
    x: &Point<T>,
    r: T,
    k: usize,
    cfg: &DualConfig<T>,
) -> Result<T> {
    if k == 0 {
        return Err(domain("k", 0.0, "k must be positive"));
    }
    check_r(space, r)?;
    Reduction::new(space, f, x, cfg)?.lambda(r, k)
}

/// Radial operators that can be tabulated with [`dual_profile`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RadialOperator {
    /// `L*_r` (even `k`).
    LStar,
    /// `L̃*_r` (odd `k`).
    LTildeStar,
    /// `λ_X(r) R*_r`.
    WeightedShiftedDual,
    /// `Λ_r` with the space's `k`.
    Lambda,
}

/// Tabulates `op` on `grid` (in parallel over grid points).
pub fn dual_profile<T: Scalar>(
    op: RadialOperator,
    space: &Space,
    f: &ScalarField<T>,
    x: &Point<T>,
    grid: &[T],
    cfg: &DualConfig<T>,
) -> Result<RadialProfile<T>> {
    for &r in grid {
        check_r(space, r)?;
    }
    let red = Reduction::new(space, f, x, cfg)?;
    let kernel = match op {
        RadialOperator::LStar => {
            need_parity(space, true, "L*_r")?;
            None
        }
        RadialOperator::LTildeStar => {
            need_parity(space, false, "L̃*_r")?;
            Some(LogKernel::new(space.k)?)
        }
        _ => None,
    };
    let values = grid
        .par_iter()
        .map(|&r| match op {
            RadialOperator::LStar => red.l_star(r),
            RadialOperator::LTildeStar => red.l_tilde_star(r, kernel.as_ref().expect("kernel built")),
            RadialOperator::WeightedShiftedDual => weighted_shifted(space, &red.sec, r, red.upper, cfg),
            RadialOperator::Lambda => red.lambda(r, space.k),
        })
        .collect::<Result<Vec<T>>>()?;
    let name = match op {
        RadialOperator::LStar => "L*_r",
        RadialOperator::LTildeStar => "L~*_r",
        RadialOperator::WeightedShiftedDual => "lambda(r) R*_r",
        RadialOperator::Lambda => "Lambda_r",
    };
    RadialProfile::new(
        grid.to_vec(),
        values,
        format!("{name} of {} on {} n={} k={}", f.name(), space.kind, space.n, space.k),
    )
}
