//! Test functions with known values and known Radon transforms.

use std::fmt;
use std::sync::Arc;

use crate::constants::sphere_area;
use crate::error::{Error, Result};
use crate::geometry::{distance_rho, Geodesic, Point, Space, SpaceKind};
use crate::scalar::{dot, from_usize, lit, lorentz, Scalar};
use crate::special::gamma_half_integer;

type Evaluator<T> = Arc<dyn Fn(&[T]) -> T + Send + Sync>;

/// Hyperplane transform data `(θ, s) ↦ g(θ, s)` on `S^{n-1} × R`.
pub type HyperplaneData<T> = Arc<dyn Fn(&[T], T) -> T + Send + Sync>;

/// Closed-form description of a registered phantom, used for exact Radon
/// transforms and truth values.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape<T> {
    /// `amp · exp(-|y - c|²)` on `R^n`.
    Gaussian { amp: T },
    /// `amp`.
    Constant { amp: T },
    /// `amp · (1 + (y·c)²)` on `S^n`.
    SphereQuadratic { amp: T },
    /// `amp · [y, c]^{-p}` on `H^n`.
    HyperbolicRadial { amp: T, power: T },
    Custom,
}

/// An evaluatable function on `X`.
#[derive(Clone)]
pub struct ScalarField<T> {
    name: String,
    kind: Option<SpaceKind>,
    eval: Evaluator<T>,
    shape: Shape<T>,
    /// Radius about `center` beyond which `|f| < 1e-14`; infinite for
    /// functions that do not decay.
    pub decay_scale: T,
    /// `f(x) = f(-x)`; required on the sphere.
    pub parity_even: bool,
    /// Ambient coordinates of the point the function is concentrated around.
    pub center: Option<Vec<T>>,
    /// Characteristic length used to size derivative grids.
    pub scale: T,
}

impl<T> fmt::Debug for ScalarField<T>
where
    T: fmt::Debug,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("name", &self.name)
            .field("kind", &self.kind)
            .field("decay_scale", &self.decay_scale)
            .field("parity_even", &self.parity_even)
            .field("center", &self.center)
            .field("scale", &self.scale)
            .finish_non_exhaustive()
    }
}

impl<T: Scalar> ScalarField<T> {
    /// A user-supplied function. `kind = None` means "any space".
    pub fn new(
        name: impl Into<String>,
        kind: Option<SpaceKind>,
        eval: impl Fn(&[T]) -> T + Send + Sync + 'static,
        decay_scale: T,
        parity_even: bool,
        center: Option<Vec<T>>,
        scale: T,
    ) -> Self {
        Self {
            name: name.into(),
            kind,
            eval: Arc::new(eval),
            shape: Shape::Custom,
            decay_scale,
            parity_even,
            center,
            scale,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Evaluates at ambient coordinates (not validated).
    #[inline]
    pub fn eval_coords(&self, y: &[T]) -> T {
        (self.eval)(y)
    }

    pub fn eval(&self, x: &Point<T>) -> T {
        (self.eval)(x.coords())
    }

    /// Checks that the field can be used on `space`.
    pub fn check_space(&self, space: &Space) -> Result<()> {
        if let Some(kind) = self.kind {
            if kind != space.kind {
                return Err(Error::InvalidSpace(format!(
                    "phantom `{}` lives on {kind}, not {}",
                    self.name, space.kind
                )));
            }
        }
        if let Some(c) = &self.center {
            if c.len() != space.ambient_dim() {
                return Err(Error::DimensionMismatch {
                    expected: space.ambient_dim(),
                    got: c.len(),
                });
            }
        }
        if space.kind == SpaceKind::Sphere && !self.parity_even {
            return Err(Error::InvalidSpace(format!(
                "phantom `{}` must be even to be recovered on the sphere",
                self.name
            )));
        }
        Ok(())
    }

    /// `factor · f`, keeping the metadata.
    pub fn scaled(&self, factor: T) -> Self {
        let inner = self.eval.clone();
        let shape = match self.shape {
            Shape::Gaussian { amp } => Shape::Gaussian { amp: amp * factor },
            Shape::Constant { amp } => Shape::Constant { amp: amp * factor },
            Shape::SphereQuadratic { amp } => Shape::SphereQuadratic { amp: amp * factor },
            Shape::HyperbolicRadial { amp, power } => Shape::HyperbolicRadial {
                amp: amp * factor,
                power,
            },
            Shape::Custom => Shape::Custom,
        };
        Self {
            name: format!("{}*{factor}", self.name),
            eval: Arc::new(move |y| factor * inner(y)),
            shape,
            ..self.clone()
        }
    }

    /// Closed-form hyperplane data `g(θ, s) = ∫_{y·θ = s} f` on `R^n` when the
    /// phantom has one.
    pub fn hyperplane_closed_form(&self, n: usize) -> Option<HyperplaneData<T>> {
        match (self.shape, self.kind) {
            (Shape::Gaussian { amp }, Some(SpaceKind::Euclidean)) => {
                let c = self.center.clone()?;
                if c.len() != n {
                    return None;
                }
                let k = amp * T::PI().powf(from_usize::<T>(n - 1) * lit(0.5));
                Some(Arc::new(move |theta: &[T], s: T| {
                    let d = s - dot(theta, &c);
                    k * (-d * d).exp()
                }))
            }
            _ => None,
        }
    }

    /// Closed-form `(Rf)(ξ)` when the phantom has one.
    pub fn exact_radon(&self, space: &Space, xi: &Geodesic<T>) -> Option<T> {
        let k = space.k;
        let c = self.center.as_ref();
        match self.shape {
            Shape::Gaussian { amp } => {
                let c = Point::from_raw(c?.clone());
                let d = distance_rho(space, &c, xi).ok()?;
                Some(amp * T::PI().powf(from_usize::<T>(k) * lit(0.5)) * (-d * d).exp())
            }
            Shape::Constant { amp } if space.kind == SpaceKind::Sphere => {
                Some(amp * sphere_area::<T>(k as i64).ok()?)
            }
            Shape::SphereQuadratic { amp } => {
                // ∫_{S^k} (y·Pc)² dy = σ_k |Pc|² / (k + 1).
                let c = c?;
                let Geodesic::GreatSphere { basis } = xi else { return None };
                let p2: T = basis.iter().map(|b| dot(b, c).powi(2)).sum();
                let area = sphere_area::<T>(k as i64).ok()?;
                Some(amp * area * (T::one() + p2 / from_usize::<T>(k + 1)))
            }
            Shape::HyperbolicRadial { amp, power } => {
                // cosh d(c, y) = cosh δ cosh s along ξ; the s-integral is
                // σ_{k-1} B(k/2, (p-k+1)/2)/2.
                let c = Point::from_raw(c?.clone());
                let rho = distance_rho(space, &c, xi).ok()?;
                let cosh_delta = (T::one() + rho * rho).sqrt();
                if (power - power.round()).abs() > lit(1e-12) || power <= from_usize(k - 1) {
                    return None;
                }
                let p = power.round().to_usize()?;
                let beta = gamma_half_integer::<T>(k).ok()? * gamma_half_integer::<T>(p - k + 1).ok()?
                    / gamma_half_integer::<T>(p + 1).ok()?;
                let s = sphere_area::<T>(k as i64 - 1).ok()?;
                Some(amp * s * beta * lit(0.5) * cosh_delta.powf(-power))
            }
            _ => None,
        }
    }
}

/// Identifiers accepted by [`phantom`].
pub const PHANTOM_IDS: &[&str] = &[
    "gaussian",
    "constant",
    "sphere-quadratic",
    "hyperbolic-radial",
    "hyperbolic-radial4",
];

/// Builds a registered phantom on `space`, concentrated at `center` (the
/// model origin when `None`).
///
/// * `gaussian`: `exp(-|y - c|²)` on `R^n`.
/// * `constant`: `1` on any space (integrable only on the sphere).
/// * `sphere-quadratic`: `1 + (y·c)²` on `S^n`, even.
/// * `hyperbolic-radial`, `hyperbolic-radial4`: `(cosh d(c, y))^{-6}` and
///   `^{-4}` on `H^n`.
pub fn phantom<T: Scalar>(id: &str, space: &Space, center: Option<&Point<T>>) -> Result<ScalarField<T>> {
    let c: Vec<T> = match center {
        Some(p) => {
            if p.dim() != space.ambient_dim() {
                return Err(Error::DimensionMismatch {
                    expected: space.ambient_dim(),
                    got: p.dim(),
                });
            }
            p.coords().to_vec()
        }
        None => Point::base(space).into_coords(),
    };
    let need = |kind: SpaceKind| -> Result<()> {
        if space.kind != kind {
            return Err(Error::InvalidSpace(format!("phantom `{id}` is defined on {kind} only")));
        }
        Ok(())
    };
    let mut field = match id {
        "gaussian" => {
            need(SpaceKind::Euclidean)?;
            let cc = c.clone();
            let mut f = ScalarField::new(
                id,
                Some(SpaceKind::Euclidean),
                move |y: &[T]| {
                    let d2: T = y.iter().zip(&cc).map(|(&a, &b)| (a - b) * (a - b)).sum();
                    (-d2).exp()
                },
                lit(6.0),
                false,
                Some(c),
                T::one(),
            );
            f.shape = Shape::Gaussian { amp: T::one() };
            f
        }
        "constant" => {
            let decay = if space.kind == SpaceKind::Sphere {
                T::zero()
            } else {
                T::infinity()
            };
            let mut f = ScalarField::new(id, None, |_: &[T]| T::one(), decay, true, Some(c), T::one());
            f.shape = Shape::Constant { amp: T::one() };
            f
        }
        "sphere-quadratic" => {
            need(SpaceKind::Sphere)?;
            let cc = c.clone();
            let mut f = ScalarField::new(
                id,
                Some(SpaceKind::Sphere),
                move |y: &[T]| T::one() + dot(y, &cc).powi(2),
                T::zero(),
                true,
                Some(c),
                T::one(),
            );
            f.shape = Shape::SphereQuadratic { amp: T::one() };
            f
        }
        "hyperbolic-radial" | "hyperbolic-radial4" => {
            need(SpaceKind::Hyperbolic)?;
            let power: T = if id == "hyperbolic-radial" { lit(6.0) } else { lit(4.0) };
            let cc = c.clone();
            let decay = if id == "hyperbolic-radial" { lit(10.0) } else { lit(13.0) };
            let mut f = ScalarField::new(
                id,
                Some(SpaceKind::Hyperbolic),
                move |y: &[T]| lorentz(y, &cc).max(T::one()).powf(-power),
                decay,
                false,
                Some(c),
                T::one(),
            );
            f.shape = Shape::HyperbolicRadial {
                amp: T::one(),
                power,
            };
            f
        }
        other => return Err(Error::UnknownPhantom(other.to_string())),
    };
    field.name = id.to_string();
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn registry() {
        let e = Space::euclidean(3, 2).unwrap();
        let g = phantom::<f64>("gaussian", &e, None).unwrap();
        assert_eq!(g.eval(&Point::base(&e)), 1.0);
        assert!(phantom::<f64>("gaussian", &Space::sphere(2, 1).unwrap(), None).is_err());
        assert!(matches!(phantom::<f64>("blob", &e, None), Err(Error::UnknownPhantom(_))));
        let h = Space::hyperbolic(2, 1).unwrap();
        let r = phantom::<f64>("hyperbolic-radial", &h, None).unwrap();
        let x = Point::from_spatial(&h, &[1.0f64.sinh(), 0.0]).unwrap();
        assert_abs_diff_eq!(r.eval(&x), 1.0f64.cosh().powi(-6), epsilon = 1e-15);
    }

    #[test]
    fn sphere_fields_are_even() {
        let s = Space::sphere(3, 2).unwrap();
        let c = Point::new(&s, vec![0.6, 0.0, 0.0, 0.8]).unwrap();
        let f = phantom::<f64>("sphere-quadratic", &s, Some(&c)).unwrap();
        for y in [[0.1, 0.2, 0.3, 0.927_361_849_549_570_3], [1.0, 0.0, 0.0, 0.0]] {
            let minus: Vec<f64> = y.iter().map(|v| -v).collect();
            assert_abs_diff_eq!(f.eval_coords(&y), f.eval_coords(&minus), epsilon = 1e-12);
        }
        assert!(f.check_space(&s).is_ok());
        let odd = ScalarField::new("odd", None, |y: &[f64]| y[0], 0.0, false, None, 1.0);
        assert!(odd.check_space(&s).is_err());
    }

    #[test]
    fn scaling_is_linear() {
        let e = Space::euclidean(2, 1).unwrap();
        let g = phantom::<f64>("gaussian", &e, None).unwrap();
        let g2 = g.scaled(2.0);
        let y = [0.3, -0.2];
        assert_abs_diff_eq!(g2.eval_coords(&y), 2.0 * g.eval_coords(&y), epsilon = 1e-15);
        let xi = Geodesic::base(&e);
        assert_abs_diff_eq!(
            g2.exact_radon(&e, &xi).unwrap(),
            2.0 * std::f64::consts::PI.sqrt(),
            epsilon = 1e-14
        );
    }
}
