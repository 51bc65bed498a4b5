use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::scalar::{axpy, dot, lit, lorentz, scaled, unit, Scalar};

use super::point::input_tol;
use super::rotation::{g_theta, transport, Rotation};
use super::{Point, Space, SpaceKind};

/// A `k`-dimensional totally geodesic submanifold.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Geodesic<T> {
    /// `{offset + Σ c_i d_i}` with orthonormal `directions` and
    /// `offset ⊥ directions`.
    Plane {
        directions: Vec<Vec<T>>,
        offset: Vec<T>,
    },
    /// `S^n ∩ span(basis)` for `k + 1` orthonormal vectors.
    GreatSphere { basis: Vec<Vec<T>> },
    /// `H^n ∩ span(foot, tangents)` where `[foot, foot] = 1`,
    /// `[v, v] = −1` for each tangent and all pairs are `[·,·]`-orthogonal.
    Hyperbolic { foot: Vec<T>, tangents: Vec<Vec<T>> },
}

fn check_len<T>(v: &[T], dim: usize) -> Result<()> {
    if v.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: v.len(),
        });
    }
    Ok(())
}

impl<T: Scalar> Geodesic<T> {
    pub fn plane(space: &Space, directions: Vec<Vec<T>>, offset: Vec<T>) -> Result<Self> {
        expect_kind(space, SpaceKind::Euclidean)?;
        check_count(&directions, space.k)?;
        let tol = input_tol::<T>();
        check_len(&offset, space.n)?;
        check_gram(&directions, space.n, |a, b| dot(a, b), &[])?;
        for d in &directions {
            let p = dot(d, &offset);
            if p.abs() > tol * (T::one() + dot(&offset, &offset).sqrt()) {
                return Err(Error::InvalidGeodesic(format!(
                    "offset is not orthogonal to the plane (inner product {p})"
                )));
            }
        }
        Ok(Geodesic::Plane { directions, offset })
    }

    pub fn great_sphere(space: &Space, basis: Vec<Vec<T>>) -> Result<Self> {
        expect_kind(space, SpaceKind::Sphere)?;
        check_count(&basis, space.k + 1)?;
        check_gram(&basis, space.n + 1, |a, b| dot(a, b), &[])?;
        Ok(Geodesic::GreatSphere { basis })
    }

    pub fn hyperbolic(space: &Space, foot: Vec<T>, tangents: Vec<Vec<T>>) -> Result<Self> {
        expect_kind(space, SpaceKind::Hyperbolic)?;
        check_count(&tangents, space.k)?;
        check_len(&foot, space.n + 1)?;
        if foot[space.n] <= T::zero() {
            return Err(Error::InvalidGeodesic("foot point is not on the upper sheet".into()));
        }
        let mut all = vec![foot.clone()];
        all.extend(tangents.iter().cloned());
        let mut signs = vec![T::one()];
        signs.extend(std::iter::repeat_n(-T::one(), space.k));
        check_gram(&all, space.n + 1, |a, b| lorentz(a, b), &signs)?;
        Ok(Geodesic::Hyperbolic { foot, tangents })
    }

    /// The reference submanifold `ξ₀`: `span(e_1, …, e_k)` in `R^n`,
    /// `span(e_1, …, e_{k+1})` on the sphere, `span(e_{n−k+1}, …, e_{n+1})`
    /// on the hyperboloid.
    pub fn base(space: &Space) -> Self {
        let (n, k) = (space.n, space.k);
        match space.kind {
            SpaceKind::Euclidean => Geodesic::Plane {
                directions: (0..k).map(|i| unit(n, i)).collect(),
                offset: vec![T::zero(); n],
            },
            SpaceKind::Sphere => Geodesic::GreatSphere {
                basis: (0..=k).map(|i| unit(n + 1, i)).collect(),
            },
            SpaceKind::Hyperbolic => Geodesic::Hyperbolic {
                foot: unit(n + 1, n),
                tangents: (n - k..n).map(|i| unit(n + 1, i)).collect(),
            },
        }
    }

    pub fn kind(&self) -> SpaceKind {
        match self {
            Geodesic::Plane { .. } => SpaceKind::Euclidean,
            Geodesic::GreatSphere { .. } => SpaceKind::Sphere,
            Geodesic::Hyperbolic { .. } => SpaceKind::Hyperbolic,
        }
    }

    /// Dimension `k` of the submanifold.
    pub fn dim(&self) -> usize {
        match self {
            Geodesic::Plane { directions, .. } => directions.len(),
            Geodesic::GreatSphere { basis } => basis.len() - 1,
            Geodesic::Hyperbolic { tangents, .. } => tangents.len(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            Geodesic::Plane { offset, .. } => offset.len(),
            Geodesic::GreatSphere { basis } => basis[0].len(),
            Geodesic::Hyperbolic { foot, .. } => foot.len(),
        }
    }

    fn check_space(&self, space: &Space) -> Result<()> {
        if self.kind() != space.kind {
            return Err(Error::InvalidGeodesic(format!(
                "{} submanifold used with a {} space",
                self.kind(),
                space.kind
            )));
        }
        if self.dim() != space.k {
            return Err(Error::DimensionMismatch {
                expected: space.k,
                got: self.dim(),
            });
        }
        check_len(&vec![(); self.ambient_dim()], space.ambient_dim())
    }

    /// Component of `v` orthogonal to the submanifold (Euclidean: to the
    /// direction space after removing the offset; sphere and hyperboloid: to
    /// the linear span, in the respective inner product).
    pub(crate) fn normal_component(&self, v: &[T]) -> Vec<T> {
        match self {
            Geodesic::Plane { directions, offset } => {
                let mut w: Vec<T> = v.iter().zip(offset).map(|(&a, &b)| a - b).collect();
                for d in directions {
                    let p = dot(&w, d);
                    axpy(-p, d, &mut w);
                }
                w
            }
            Geodesic::GreatSphere { basis } => {
                let mut w = v.to_vec();
                for b in basis {
                    let p = dot(v, b);
                    axpy(-p, b, &mut w);
                }
                w
            }
            Geodesic::Hyperbolic { foot, tangents } => {
                let mut w = v.to_vec();
                axpy(-lorentz(v, foot), foot, &mut w);
                for t in tangents {
                    axpy(lorentz(v, t), t, &mut w);
                }
                w
            }
        }
    }

    /// Image under an isometry fixing the origin of the model.
    pub fn rotated(&self, g: &Rotation<T>) -> Self {
        match self {
            Geodesic::Plane { directions, offset } => Geodesic::Plane {
                directions: directions.iter().map(|d| g.apply(d)).collect(),
                offset: g.apply(offset),
            },
            Geodesic::GreatSphere { basis } => Geodesic::GreatSphere {
                basis: basis.iter().map(|b| g.apply(b)).collect(),
            },
            Geodesic::Hyperbolic { foot, tangents } => Geodesic::Hyperbolic {
                foot: g.apply(foot),
                tangents: tangents.iter().map(|t| g.apply(t)).collect(),
            },
        }
    }

    /// Translate a Euclidean plane by `shift`; the stored offset stays the
    /// foot of the perpendicular from the origin.
    pub fn translated(&self, shift: &[T]) -> Result<Self> {
        match self {
            Geodesic::Plane { directions, offset } => {
                check_len(shift, offset.len())?;
                let moved: Vec<T> = offset.iter().zip(shift).map(|(&a, &b)| a + b).collect();
                Ok(Geodesic::Plane {
                    directions: directions.clone(),
                    offset: project_out(&moved, directions),
                })
            }
            _ => Err(Error::InvalidGeodesic("translation applies to Euclidean planes only".into())),
        }
    }
}

fn expect_kind(space: &Space, kind: SpaceKind) -> Result<()> {
    if space.kind != kind {
        return Err(Error::InvalidGeodesic(format!(
            "a {kind} submanifold cannot live in a {} space",
            space.kind
        )));
    }
    Ok(())
}

fn check_count<T>(v: &[Vec<T>], count: usize) -> Result<()> {
    if v.len() != count {
        return Err(Error::DimensionMismatch {
            expected: count,
            got: v.len(),
        });
    }
    Ok(())
}

fn check_gram<T: Scalar>(
    vecs: &[Vec<T>],
    dim: usize,
    form: impl Fn(&[T], &[T]) -> T,
    signs: &[T],
) -> Result<()> {
    let tol = input_tol::<T>();
    for (i, a) in vecs.iter().enumerate() {
        check_len(a, dim)?;
        for (j, b) in vecs.iter().enumerate().skip(i) {
            let want = if i == j {
                signs.get(i).copied().unwrap_or(T::one())
            } else {
                T::zero()
            };
            let got = form(a, b);
            if (got - want).abs() > tol {
                return Err(Error::InvalidGeodesic(format!(
                    "frame is not orthonormal: entry ({i}, {j}) = {got}, expected {want}"
                )));
            }
        }
    }
    Ok(())
}

fn project_out<T: Scalar>(v: &[T], directions: &[Vec<T>]) -> Vec<T> {
    let mut w = v.to_vec();
    for d in directions {
        let p = dot(&w, d);
        axpy(-p, d, &mut w);
    }
    w
}

/// `ρ(x, ξ)`: `d(x, ξ)` in `R^n`, `sin d(x, ξ)` on the sphere and
/// `sinh d(x, ξ)` on the hyperboloid.
pub fn distance_rho<T: Scalar>(space: &Space, x: &Point<T>, xi: &Geodesic<T>) -> Result<T> {
    check_len(x.coords(), space.ambient_dim())?;
    xi.check_space(space)?;
    let w = xi.normal_component(x.coords());
    Ok(match space.kind {
        SpaceKind::Euclidean | SpaceKind::Sphere => dot(&w, &w).sqrt(),
        // x = Px + w with w spacelike: sinh² d = [Px, Px] − 1 = −[w, w].
        SpaceKind::Hyperbolic => (-lorentz(&w, &w)).max(T::zero()).sqrt(),
    })
}

/// Geodesic distance `d(x, ξ)`.
pub fn distance<T: Scalar>(space: &Space, x: &Point<T>, xi: &Geodesic<T>) -> Result<T> {
    let rho = distance_rho(space, x, xi)?;
    Ok(match space.kind {
        SpaceKind::Euclidean => rho,
        SpaceKind::Sphere => rho.min(T::one()).asin(),
        SpaceKind::Hyperbolic => rho.asinh(),
    })
}

/// The submanifold at distance `ρ = r` from `x` selected by `g`:
/// `γζ₀ + x + rγe_n` in `R^n`, `r_x γ g_θ^{-1} ξ₀` with `θ = arcsin r`
/// (sphere) or `θ = arcsinh r` (hyperboloid).
pub fn geodesic_at_distance<T: Scalar>(
    space: &Space,
    x: &Point<T>,
    r: T,
    g: &Rotation<T>,
) -> Result<Geodesic<T>> {
    check_len(x.coords(), space.ambient_dim())?;
    if g.dim() != space.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: space.ambient_dim(),
            got: g.dim(),
        });
    }
    if !(r >= T::zero()) {
        return Err(domain("r", r, "distance must be non-negative"));
    }
    let (n, k) = (space.n, space.k);
    match space.kind {
        SpaceKind::Euclidean => {
            let directions: Vec<Vec<T>> = (0..k).map(|i| g.apply(&unit(n, i))).collect();
            let normal = g.apply(&unit(n, n - 1));
            let mut point = x.coords().to_vec();
            axpy(r, &normal, &mut point);
            Ok(Geodesic::Plane {
                offset: project_out(&point, &directions),
                directions,
            })
        }
        SpaceKind::Sphere => {
            if r >= T::one() {
                return Err(domain("r", r, "sphere requires r = sin θ < 1"));
            }
            let theta = r.asin();
            let m = transport(space, x)?
                .compose(g)
                .compose(&g_theta(space, theta)?.inverse());
            Ok(Geodesic::<T>::base(space).rotated(&m))
        }
        SpaceKind::Hyperbolic => {
            let theta = r.asinh();
            let m = transport(space, x)?
                .compose(g)
                .compose(&g_theta(space, theta)?.inverse());
            Ok(Geodesic::<T>::base(space).rotated(&m))
        }
    }
}

/// Nearest point of `ξ` to `x` (for `x` not at distance `π/2` from a great
/// sphere).
pub fn foot_point<T: Scalar>(space: &Space, x: &Point<T>, xi: &Geodesic<T>) -> Result<Point<T>> {
    check_len(x.coords(), space.ambient_dim())?;
    xi.check_space(space)?;
    let w = xi.normal_component(x.coords());
    let p: Vec<T> = x.coords().iter().zip(&w).map(|(&a, &b)| a - b).collect();
    Ok(match space.kind {
        SpaceKind::Euclidean => Point::from_raw(p),
        SpaceKind::Sphere => {
            let np = dot(&p, &p).sqrt();
            if np <= lit(1e-12) {
                return Err(Error::InvalidGeodesic("point is polar to the great sphere".into()));
            }
            Point::from_raw(scaled(T::one() / np, &p))
        }
        SpaceKind::Hyperbolic => {
            let q = lorentz(&p, &p).sqrt();
            Point::from_raw(scaled(T::one() / q, &p))
        }
    })
}
