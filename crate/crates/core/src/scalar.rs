//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating point type the library is generic over: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + NumAssign + Sum + Debug + Display + LowerExp + Send + Sync + 'static
{
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

#[inline]
pub(crate) fn from_usize<T: Scalar>(n: usize) -> T {
    T::from_usize(n).expect("integer representable in scalar type")
}

#[inline]
pub(crate) fn from_i64<T: Scalar>(n: i64) -> T {
    T::from_i64(n).expect("integer representable in scalar type")
}

/// `(-1)^p` for an integer exponent.
#[inline]
pub(crate) fn sign_pow<T: Scalar>(p: i64) -> T {
    if p.rem_euclid(2) == 0 {
        T::one()
    } else {
        -T::one()
    }
}

/// Default absolute quadrature tolerance: tight for `f64`, relaxed to the
/// precision floor for `f32`.
#[inline]
pub fn default_tol<T: Scalar>() -> T {
    lit::<T>(1e-12).max(T::epsilon() * lit(64.0))
}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

/// Lorentz form `[x, y] = -x_1 y_1 - ... - x_n y_n + x_{n+1} y_{n+1}`.
pub(crate) fn lorentz<T: Scalar>(a: &[T], b: &[T]) -> T {
    let last = a.len() - 1;
    a[last] * b[last] - dot(&a[..last], &b[..last])
}

pub(crate) fn axpy<T: Scalar>(alpha: T, x: &[T], y: &mut [T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub(crate) fn scaled<T: Scalar>(alpha: T, x: &[T]) -> Vec<T> {
    x.iter().map(|&v| alpha * v).collect()
}

pub(crate) fn unit<T: Scalar>(dim: usize, i: usize) -> Vec<T> {
    let mut e = vec![T::zero(); dim];
    e[i] = T::one();
    e
}
