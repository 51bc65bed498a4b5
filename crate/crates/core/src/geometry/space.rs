use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// The three constant-curvature models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    Euclidean,
    Sphere,
    Hyperbolic,
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpaceKind::Euclidean => "euclidean",
            SpaceKind::Sphere => "sphere",
            SpaceKind::Hyperbolic => "hyperbolic",
        })
    }
}

impl FromStr for SpaceKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "euclidean" | "r" | "rn" => Ok(SpaceKind::Euclidean),
            "sphere" | "s" | "sn" => Ok(SpaceKind::Sphere),
            "hyperbolic" | "h" | "hn" => Ok(SpaceKind::Hyperbolic),
            other => Err(Error::InvalidSpace(format!("unknown space kind `{other}`"))),
        }
    }
}

/// A constant-curvature space `X` of dimension `n` together with the
/// dimension `k` of the totally geodesic submanifolds being integrated over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Space {
    pub kind: SpaceKind,
    pub n: usize,
    pub k: usize,
}

impl Space {
    pub fn new(kind: SpaceKind, n: usize, k: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSpace(format!("n = {n} must be at least 2")));
        }
        if k < 1 || k > n - 1 {
            return Err(Error::InvalidSpace(format!(
                "k = {k} must satisfy 1 <= k <= n - 1 = {}",
                n - 1
            )));
        }
        Ok(Self { kind, n, k })
    }

    pub fn euclidean(n: usize, k: usize) -> Result<Self> {
        Self::new(SpaceKind::Euclidean, n, k)
    }

    pub fn sphere(n: usize, k: usize) -> Result<Self> {
        Self::new(SpaceKind::Sphere, n, k)
    }

    pub fn hyperbolic(n: usize, k: usize) -> Result<Self> {
        Self::new(SpaceKind::Hyperbolic, n, k)
    }

    /// Length of the coordinate vectors of points: `n` for `R^n`, `n + 1` for
    /// the sphere and hyperboloid models.
    pub fn ambient_dim(&self) -> usize {
        match self.kind {
            SpaceKind::Euclidean => self.n,
            SpaceKind::Sphere | SpaceKind::Hyperbolic => self.n + 1,
        }
    }

    pub fn k_is_even(&self) -> bool {
        self.k.is_multiple_of(2)
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(n={}, k={})", self.kind, self.n, self.k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_constraints() {
        assert!(Space::euclidean(1, 1).is_err());
        assert!(Space::euclidean(3, 0).is_err());
        assert!(Space::euclidean(3, 3).is_err());
        assert!(Space::sphere(3, 2).is_ok());
        assert_eq!(Space::hyperbolic(3, 1).unwrap().ambient_dim(), 4);
        assert_eq!(Space::euclidean(3, 1).unwrap().ambient_dim(), 3);
    }

    #[test]
    fn parse_kind() {
        assert_eq!("Sphere".parse::<SpaceKind>().unwrap(), SpaceKind::Sphere);
        assert!("torus".parse::<SpaceKind>().is_err());
    }
}
