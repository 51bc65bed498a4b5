//! Forward transforms `Rf` and the spherical-mean families.

use rayon::prelude::*;
use serde::Serialize;

use crate::constants::sphere_area;
use crate::error::{domain, Error, Result};
use crate::geometry::{foot_point, transport, Geodesic, Point, Space, SpaceKind};
use crate::numerics::{integrate_adaptive, QuadConfig};
use crate::phantom::ScalarField;
use crate::scalar::{axpy, dot, lit, lorentz, Scalar};

/// Largest acceptable estimate of the integral discarded by truncation.
pub const TAIL_LIMIT: f64 = 1e-8;

/// Which mean a [`MeanProfile`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MeanVariant {
    Plain,
    Tilde,
}

/// Mean values `t ↦ M_t f(x)` (or the tilde version) on a grid.
#[derive(Debug, Clone, Serialize)]
pub struct MeanProfile<T> {
    pub space: Space,
    pub center: Point<T>,
    pub grid: Vec<T>,
    pub values: Vec<T>,
    pub variant: MeanVariant,
}

/// Averages over the sections of `X` around a fixed point: the spheres
/// `{a x + b ω}` with `ω` ranging over the unit directions orthogonal to
/// `x` (Euclidean: `{x + b θ}`).
pub(crate) struct Sections<'a, T> {
    f: &'a ScalarField<T>,
    x: Vec<T>,
    dirs: Vec<Vec<T>>,
    weights: Vec<T>,
}

impl<'a, T: Scalar> Sections<'a, T> {
    pub(crate) fn new(space: &Space, f: &'a ScalarField<T>, x: &Point<T>, cfg: &QuadConfig<T>) -> Result<Self> {
        if x.dim() != space.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: space.ambient_dim(),
                got: x.dim(),
            });
        }
        let rule = cfg.sphere(space.n - 1)?;
        let area: T = rule.weights.iter().copied().sum();
        let dirs = match space.kind {
            SpaceKind::Euclidean => rule.points.clone(),
            _ => {
                let m = transport(space, x)?;
                let mut buf = vec![T::zero(); space.n + 1];
                rule.points
                    .iter()
                    .map(|p| {
                        buf[..space.n].copy_from_slice(p);
                        buf[space.n] = T::zero();
                        m.apply(&buf)
                    })
                    .collect()
            }
        };
        Ok(Self {
            f,
            x: x.coords().to_vec(),
            dirs,
            weights: rule.weights.iter().map(|&w| w / area).collect(),
        })
    }

    /// `avg_ω f(a x + b ω)`.
    pub(crate) fn average(&self, a: T, b: T) -> T {
        let mut y = vec![T::zero(); self.x.len()];
        let mut acc = T::zero();
        for (w, &wt) in self.dirs.iter().zip(&self.weights) {
            for ((yi, &xi), &wi) in y.iter_mut().zip(&self.x).zip(w) {
                *yi = a * xi + b * wi;
            }
            acc += wt * self.f.eval_coords(&y);
        }
        acc
    }
}

pub(crate) fn check_field<T: Scalar>(space: &Space, f: &ScalarField<T>) -> Result<()> {
    f.check_space(space)
}

fn check_geodesic<T: Scalar>(space: &Space, xi: &Geodesic<T>) -> Result<()> {
    if xi.kind() != space.kind || xi.dim() != space.k || xi.ambient_dim() != space.ambient_dim() {
        return Err(Error::InvalidGeodesic(format!(
            "{}-dimensional {} submanifold in R^{} does not belong to {} n={} k={}",
            xi.dim(),
            xi.kind(),
            xi.ambient_dim(),
            space.kind,
            space.n,
            space.k
        )));
    }
    Ok(())
}

/// `(Rf)(ξ) = ∫_ξ f`, with Lebesgue measure on planes and great spheres and
/// the Riemannian measure on hyperbolic geodesic submanifolds.
///
/// Infinite submanifolds are integrated in geodesic polar coordinates about
/// the point of `ξ` nearest the field's center, out to `decay_scale`. The
/// discarded tail is estimated as `σ_{k-1} R^k max|f|` on the truncation
/// sphere (Euclidean) or its hyperbolic analogue and must stay below
/// [`TAIL_LIMIT`].
pub fn radon_forward<T: Scalar>(
    space: &Space,
    f: &ScalarField<T>,
    xi: &Geodesic<T>,
    cfg: &QuadConfig<T>,
) -> Result<T> {
    check_field(space, f)?;
    check_geodesic(space, xi)?;
    let k = space.k;
    match xi {
        Geodesic::GreatSphere { basis } => {
            let rule = cfg.sphere(k)?;
            let mut y = vec![T::zero(); space.n + 1];
            Ok(rule.integrate(|w| {
                y.iter_mut().for_each(|v| *v = T::zero());
                for (&c, b) in w.iter().zip(basis) {
                    axpy(c, b, &mut y);
                }
                f.eval_coords(&y)
            }))
        }
        Geodesic::Plane { directions, offset } => {
            let origin = match &f.center {
                Some(c) => foot_point(space, &Point::from_raw(c.clone()), xi)?.into_coords(),
                None => offset.clone(),
            };
            polar_integral(f, &origin, directions, cfg, k, |s| (s, T::one()), |s| s.powi(k as i32 - 1))
        }
        Geodesic::Hyperbolic { foot, tangents } => {
            let origin = match &f.center {
                Some(c) => foot_point(space, &Point::from_raw(c.clone()), xi)?.into_coords(),
                None => foot.clone(),
            };
            let frame = tangent_frame(&origin, foot, tangents, k)?;
            // y(s, ω) = cosh s · p + sinh s · Σ ω_i v_i.
            polar_integral(
                f,
                &origin,
                &frame,
                cfg,
                k,
                |s| (s.sinh(), s.cosh()),
                |s| s.sinh().powi(k as i32 - 1),
            )
        }
    }
}

/// Orthonormal (for `−[·,·]`) basis of the tangent space at `p` of the
/// hyperbolic submanifold spanned by `foot` and `tangents`.
fn tangent_frame<T: Scalar>(p: &[T], foot: &[T], tangents: &[Vec<T>], k: usize) -> Result<Vec<Vec<T>>> {
    let mut frame: Vec<Vec<T>> = Vec::with_capacity(k);
    for v in tangents.iter().chain(std::iter::once(&foot.to_vec())) {
        if frame.len() == k {
            break;
        }
        let mut u = v.clone();
        axpy(-lorentz(v, p), p, &mut u);
        for e in &frame {
            axpy(lorentz(&u, e), e, &mut u);
        }
        let q = -lorentz(&u, &u);
        if q > lit(1e-6) {
            let s = q.sqrt();
            u.iter_mut().for_each(|c| *c /= s);
            frame.push(u);
        }
    }
    if frame.len() != k {
        return Err(Error::InvalidGeodesic("degenerate tangent frame".into()));
    }
    Ok(frame)
}

/// `∫_0^R ∫_{S^{k-1}} f(a(s) Σ ω_i e_i + b(s) p) dω jac(s) ds` with
/// `(a, b) = chart(s)`.
fn polar_integral<T: Scalar>(
    f: &ScalarField<T>,
    origin: &[T],
    frame: &[Vec<T>],
    cfg: &QuadConfig<T>,
    k: usize,
    chart: impl Fn(T) -> (T, T),
    jac: impl Fn(T) -> T,
) -> Result<T> {
    let radius = f.decay_scale;
    if !radius.is_finite() {
        return Err(Error::NotIntegrable {
            tail: f64::INFINITY,
            limit: TAIL_LIMIT,
        });
    }
    let rule = cfg.sphere(k - 1)?;
    // Directions in the ambient space, one per rule point.
    let dirs: Vec<Vec<T>> = rule
        .points
        .iter()
        .map(|w| {
            let mut d = vec![T::zero(); origin.len()];
            for (&c, e) in w.iter().zip(frame) {
                axpy(c, e, &mut d);
            }
            d
        })
        .collect();
    let mut y = vec![T::zero(); origin.len()];
    let mut shell = |s: T| -> T {
        let (a, b) = chart(s);
        let mut acc = T::zero();
        for (d, &w) in dirs.iter().zip(&rule.weights) {
            for ((yi, &oi), &di) in y.iter_mut().zip(origin).zip(d) {
                *yi = b * oi + a * di;
            }
            acc += w * f.eval_coords(&y);
        }
        acc
    };
    let edge = shell(radius).abs();
    let tail = edge * jac(radius) * radius;
    if tail > lit(TAIL_LIMIT) {
        return Err(Error::NotIntegrable {
            tail: tail.to_f64().unwrap_or(f64::NAN),
            limit: TAIL_LIMIT,
        });
    }
    Ok(integrate_adaptive(|s| shell(s) * jac(s), T::zero(), radius, cfg.tol)?.value)
}

/// Normalized mean of `f` over the section at parameter `t` about `x`:
/// the sphere `|y − x| = t` (Euclidean), `x·y = t` (sphere, `|t| ≤ 1`,
/// endpoints as limits) or `[x, y] = t` (hyperboloid, `t ≥ 1`).
pub fn spherical_mean<T: Scalar>(
    space: &Space,
    f: &ScalarField<T>,
    x: &Point<T>,
    t: T,
    cfg: &QuadConfig<T>,
) -> Result<T> {
    check_field(space, f)?;
    let sec = Sections::new(space, f, x, cfg)?;
    plain_at(space, &sec, t)
}

fn plain_at<T: Scalar>(space: &Space, sec: &Sections<'_, T>, t: T) -> Result<T> {
    match space.kind {
        SpaceKind::Euclidean => {
            if !(t >= T::zero()) {
                return Err(domain("t", t, "Euclidean means need t >= 0"));
            }
            Ok(sec.average(T::one(), t))
        }
        SpaceKind::Sphere => {
            if !(t.abs() <= T::one()) {
                return Err(domain("t", t, "spherical sections need -1 <= t <= 1"));
            }
            Ok(sec.average(t, (T::one() - t * t).max(T::zero()).sqrt()))
        }
        SpaceKind::Hyperbolic => {
            if !(t >= T::one()) {
                return Err(domain("t", t, "hyperbolic sections need t >= 1"));
            }
            Ok(sec.average(t, (t * t - T::one()).sqrt()))
        }
    }
}

/// `M̃_t f(x)`: `(1 − t²)^{-1/2} M_{√(1−t²)} f(x)` on the sphere,
/// `(1 + t²)^{-1/2} M_{√(1+t²)} f(x)` on the hyperboloid and the plain mean
/// in `R^n`.
pub fn tilde_mean<T: Scalar>(
    space: &Space,
    f: &ScalarField<T>,
    x: &Point<T>,
    t: T,
    cfg: &QuadConfig<T>,
) -> Result<T> {
    check_field(space, f)?;
    let sec = Sections::new(space, f, x, cfg)?;
    tilde_at(space, &sec, t)
}

pub(crate) fn tilde_at<T: Scalar>(space: &Space, sec: &Sections<'_, T>, t: T) -> Result<T> {
    if !(t >= T::zero()) {
        return Err(domain("t", t, "tilde means need t >= 0"));
    }
    match space.kind {
        SpaceKind::Euclidean => Ok(sec.average(T::one(), t)),
        SpaceKind::Sphere => {
            if t >= T::one() {
                return Err(domain("t", t, "spherical tilde means need t < 1"));
            }
            let c = (T::one() - t * t).sqrt();
            Ok(sec.average(c, t) / c)
        }
        SpaceKind::Hyperbolic => {
            let c = (T::one() + t * t).sqrt();
            Ok(sec.average(c, t) / c)
        }
    }
}

/// Evaluates the chosen mean at every grid point (in parallel).
pub fn mean_profile<T: Scalar>(
    space: &Space,
    f: &ScalarField<T>,
    x: &Point<T>,
    grid: &[T],
    variant: MeanVariant,
    cfg: &QuadConfig<T>,
) -> Result<MeanProfile<T>> {
    check_field(space, f)?;
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidProfile("grid must be strictly increasing".into()));
    }
    let sec = Sections::new(space, f, x, cfg)?;
    let values = grid
        .par_iter()
        .map(|&t| match variant {
            MeanVariant::Plain => plain_at(space, &sec, t),
            MeanVariant::Tilde => tilde_at(space, &sec, t),
        })
        .collect::<Result<Vec<T>>>()?;
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidProfile(format!("non-finite mean value {bad}")));
    }
    Ok(MeanProfile {
        space: *space,
        center: x.clone(),
        grid: grid.to_vec(),
        values,
        variant,
    })
}

/// `∫_{R^n} f` in polar coordinates about `x`:
/// `σ_{n-1} ∫_0^R t^{n-1} M_t f(x) dt` (Euclidean only).
pub fn polar_total<T: Scalar>(space: &Space, f: &ScalarField<T>, x: &Point<T>, cfg: &QuadConfig<T>) -> Result<T> {
    if space.kind != SpaceKind::Euclidean {
        return Err(Error::InvalidSpace("polar totals are computed on R^n".into()));
    }
    check_field(space, f)?;
    let sec = Sections::new(space, f, x, cfg)?;
    let reach = f.decay_scale
        + f.center
            .as_ref()
            .map(|c| {
                let d: Vec<T> = c.iter().zip(x.coords()).map(|(&a, &b)| a - b).collect();
                dot(&d, &d).sqrt()
            })
            .unwrap_or(T::zero());
    let area = sphere_area::<T>(space.n as i64 - 1)?;
    let n1 = space.n as i32 - 1;
    let v = integrate_adaptive(|t| t.powi(n1) * sec.average(T::one(), t), T::zero(), reach, cfg.tol)?;
    Ok(area * v.value)
}
