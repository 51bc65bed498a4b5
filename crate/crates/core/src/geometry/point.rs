use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{dot, lit, lorentz, Scalar};

use super::{SpaceKind, Space};

/// Tolerance used when validating model constraints on input.
pub(crate) fn input_tol<T: Scalar>() -> T {
    lit::<T>(1e-8).max(T::epsilon() * lit(256.0))
}

/// A point of `X` in its ambient model: `R^n`, the unit sphere in `R^{n+1}`
/// or the upper sheet of the hyperboloid `[x, x] = 1` in `R^{n+1}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Point<T> {
    coords: Vec<T>,
}

impl<T: Scalar> Point<T> {
    /// Validates `coords` against the model of `space`.
    pub fn new(space: &Space, coords: Vec<T>) -> Result<Self> {
        let dim = space.ambient_dim();
        if coords.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: coords.len(),
            });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidPoint("non-finite coordinate".into()));
        }
        let tol = input_tol::<T>();
        match space.kind {
            SpaceKind::Euclidean => {}
            SpaceKind::Sphere => {
                let q = dot(&coords, &coords);
                if (q - T::one()).abs() > tol {
                    return Err(Error::InvalidPoint(format!("|x|^2 = {q}, expected 1")));
                }
            }
            SpaceKind::Hyperbolic => {
                let q = lorentz(&coords, &coords);
                if (q - T::one()).abs() > tol || coords[dim - 1] <= T::zero() {
                    return Err(Error::InvalidPoint(format!(
                        "[x, x] = {q} with x_(n+1) = {}, expected 1 on the upper sheet",
                        coords[dim - 1]
                    )));
                }
            }
        }
        Ok(Self { coords })
    }

    /// Origin of the model: `0` in `R^n`, `e_{n+1}` on the sphere and hyperboloid.
    pub fn base(space: &Space) -> Self {
        let dim = space.ambient_dim();
        let mut coords = vec![T::zero(); dim];
        if space.kind != SpaceKind::Euclidean {
            coords[dim - 1] = T::one();
        }
        Self { coords }
    }

    /// Completes the first `n` coordinates to a point: unchanged in `R^n`,
    /// upper hemisphere on the sphere (requires `|s| <= 1`), hyperboloid sheet
    /// otherwise.
    pub fn from_spatial(space: &Space, spatial: &[T]) -> Result<Self> {
        if spatial.len() != space.n {
            return Err(Error::DimensionMismatch {
                expected: space.n,
                got: spatial.len(),
            });
        }
        let q = dot(spatial, spatial);
        let mut coords = spatial.to_vec();
        match space.kind {
            SpaceKind::Euclidean => {}
            SpaceKind::Sphere => {
                if q > T::one() {
                    return Err(Error::InvalidPoint(format!(
                        "spatial part has |s|^2 = {q} > 1"
                    )));
                }
                coords.push((T::one() - q).sqrt());
            }
            SpaceKind::Hyperbolic => coords.push((T::one() + q).sqrt()),
        }
        Self::new(space, coords)
    }

    pub(crate) fn from_raw(coords: Vec<T>) -> Self {
        Self { coords }
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<T> {
        self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Geodesic distance between two points of the same model.
    pub fn distance(&self, space: &Space, other: &Self) -> Result<T> {
        let dim = space.ambient_dim();
        for p in [self, other] {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.dim(),
                });
            }
        }
        let (a, b) = (&self.coords, &other.coords);
        Ok(match space.kind {
            SpaceKind::Euclidean => {
                a.iter().zip(b).map(|(&x, &y)| (x - y) * (x - y)).sum::<T>().sqrt()
            }
            // Chord-based formulas avoid the loss of accuracy of acos near 1.
            SpaceKind::Sphere => {
                let chord = a.iter().zip(b).map(|(&x, &y)| (x - y) * (x - y)).sum::<T>().sqrt();
                lit::<T>(2.0) * (chord * lit(0.5)).min(T::one()).asin()
            }
            SpaceKind::Hyperbolic => lorentz(a, b).max(T::one()).acosh(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn validation() {
        let s = Space::sphere(2, 1).unwrap();
        assert!(Point::new(&s, vec![0.0, 0.0, 1.0]).is_ok());
        assert!(Point::new(&s, vec![0.0, 0.1, 1.0]).is_err());
        assert!(Point::new(&s, vec![0.0, 1.0]).is_err());
        let h = Space::hyperbolic(2, 1).unwrap();
        assert!(Point::new(&h, vec![0.0, 0.0, -1.0]).is_err());
        let x = Point::from_spatial(&h, &[0.3, -0.4]).unwrap();
        assert_abs_diff_eq!(lorentz(x.coords(), x.coords()), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn distances() {
        let h = Space::hyperbolic(2, 1).unwrap();
        let x0 = Point::<f64>::base(&h);
        let x = Point::from_spatial(&h, &[0.7f64.sinh(), 0.0]).unwrap();
        assert_abs_diff_eq!(x0.distance(&h, &x).unwrap(), 0.7, epsilon = 1e-14);
        let s = Space::sphere(2, 1).unwrap();
        let n = Point::<f64>::base(&s);
        let e = Point::new(&s, vec![1.0, 0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(n.distance(&s, &e).unwrap(), std::f64::consts::FRAC_PI_2, epsilon = 1e-15);
    }
}
