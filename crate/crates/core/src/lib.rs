//! Totally geodesic Radon transforms on `R^n`, `S^n` and `H^n` and their
//! inversion by Mader-type formulas.
//!
//! The numerical core is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` aliases below fix the common double precision instantiation.

// `!(x > 0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod constants;
pub mod dual;
pub mod error;
pub mod geometry;
pub mod inversion;
pub mod kernels;
pub mod numerics;
pub mod phantom;
pub mod scalar;
pub mod special;
pub mod transforms;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use geometry::{Geodesic, Point, Rotation, Space, SpaceKind};
pub use numerics::{QuadConfig, RadialProfile};

pub type Point64 = geometry::Point<f64>;
pub type Geodesic64 = geometry::Geodesic<f64>;
pub type Rotation64 = geometry::Rotation<f64>;
pub type ScalarField64 = phantom::ScalarField<f64>;
pub type QuadConfig64 = numerics::QuadConfig<f64>;
pub type RadialProfile64 = numerics::RadialProfile<f64>;
pub type DualConfig64 = dual::DualConfig<f64>;
pub type InversionConfig64 = inversion::InversionConfig<f64>;
pub type InversionReport64 = inversion::InversionReport<f64>;
