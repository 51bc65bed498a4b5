use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{from_usize, Scalar};

use super::linalg::{least_squares, Mat};

/// Samples `r ↦ value` on a strictly increasing grid, either starting at 0 or
/// symmetric about 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProfile<T> {
    grid: Vec<T>,
    values: Vec<T>,
    meta: String,
}

impl<T: Scalar> RadialProfile<T> {
    pub fn new(grid: Vec<T>, values: Vec<T>, meta: impl Into<String>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::InvalidProfile(format!(
                "{} grid points but {} values",
                grid.len(),
                values.len()
            )));
        }
        if let Some(w) = grid.windows(2).find(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidProfile(format!(
                "grid not strictly increasing at {} -> {}",
                w[0], w[1]
            )));
        }
        if let Some(v) = values.iter().chain(&grid).find(|v| !v.is_finite()) {
            return Err(Error::InvalidProfile(format!("non-finite entry {v}")));
        }
        Ok(Self {
            grid,
            values,
            meta: meta.into(),
        })
    }

    /// Uniform one-sided grid `r_j = j h`, `j = 0..=count`.
    pub fn one_sided_grid(h: T, count: usize) -> Vec<T> {
        (0..=count).map(|j| from_usize::<T>(j) * h).collect()
    }

    /// Uniform symmetric grid `t_j = j h`, `j = -count..=count`.
    pub fn symmetric_grid(h: T, count: usize) -> Vec<T> {
        let c = count as i64;
        (-c..=c)
            .map(|j| crate::scalar::from_i64::<T>(j) * h)
            .collect()
    }

    pub fn grid(&self) -> &[T] {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn meta(&self) -> &str {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Pointwise map of the values, keeping the grid.
    pub fn map_values(&self, meta: impl Into<String>, f: impl Fn(T, T) -> T) -> Result<Self> {
        let values = self
            .grid
            .iter()
            .zip(&self.values)
            .map(|(&r, &v)| f(r, v))
            .collect();
        Self::new(self.grid.clone(), values, meta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EndpointDerivative<T> {
    /// Estimate of `d^order/dr^order` at `r = 0`.
    pub value: T,
    /// Fit residual normalized by `sqrt(N) · max|value|`.
    pub residual: T,
}

/// Derivative of order `order` at `r = 0` from a least-squares polynomial fit
/// of degree `fit_degree` to the whole profile.
///
/// The fit is carried out in the scaled variable `x = r / max|r|` and solved
/// by Householder QR.
pub fn endpoint_derivative<T: Scalar>(
    profile: &RadialProfile<T>,
    order: usize,
    fit_degree: usize,
) -> Result<EndpointDerivative<T>> {
    if order == 0 {
        return Err(crate::error::domain("order", 0.0, "derivative order must be positive"));
    }
    if fit_degree < order + 1 {
        return Err(crate::error::domain(
            "fit_degree",
            fit_degree as f64,
            "fit degree must be at least order + 1",
        ));
    }
    if profile.len() < fit_degree + 4 {
        return Err(Error::InvalidProfile(format!(
            "{} points cannot support a degree-{fit_degree} fit (need {})",
            profile.len(),
            fit_degree + 4
        )));
    }
    let scale = profile
        .grid
        .iter()
        .fold(T::zero(), |acc, r| acc.max(r.abs()));
    if scale == T::zero() {
        return Err(Error::RankDeficient("all grid points coincide".into()));
    }
    let xs: Vec<T> = profile.grid.iter().map(|&r| r / scale).collect();
    let cols: Vec<Vec<T>> = (0..=fit_degree)
        .map(|p| xs.iter().map(|&x| x.powi(p as i32)).collect())
        .collect();
    let design = Mat::from_columns(&cols);
    let (coeffs, resid) = least_squares(&design, &profile.values)?;
    let factorial: T = (1..=order).map(from_usize::<T>).fold(T::one(), |a, b| a * b);
    let value = coeffs[order] * factorial / scale.powi(order as i32);
    let vmax = profile
        .values
        .iter()
        .fold(T::zero(), |acc, v| acc.max(v.abs()))
        .max(T::min_positive_value());
    let residual = resid / (from_usize::<T>(profile.len()).sqrt() * vmax);
    Ok(EndpointDerivative { value, residual })
}
