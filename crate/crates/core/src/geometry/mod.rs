//! The three model spaces, their points and totally geodesic submanifolds,
//! distances and the rotations used to build submanifolds at a prescribed
//! distance.

mod geodesic;
mod point;
mod rotation;
mod space;

pub use geodesic::{distance, distance_rho, foot_point, geodesic_at_distance, Geodesic};
pub use point::Point;
pub use rotation::{g_theta, haar_rotation, haar_rotation_rng, transport, Rotation};
pub use space::{Space, SpaceKind};
