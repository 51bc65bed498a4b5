//! Quadrature engines, sphere cubature and endpoint differentiation.

mod adaptive;
mod derivative;
mod gauss;
pub mod linalg;
mod singular;
mod sphere_rule;

pub use adaptive::{integrate_adaptive, integrate_semi_infinite, QuadResult, Tolerance};
pub use derivative::{endpoint_derivative, EndpointDerivative, RadialProfile};
pub use gauss::{gauss_legendre, QuadRule, MAX_GAUSS_NODES};
pub use singular::{integrate_endpoint_singular, quad_log_singular, Endpoint};
pub use sphere_rule::{QuadConfig, SphereRule};
