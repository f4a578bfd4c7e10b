pub mod closest_point;
pub mod config;
pub mod error;
pub mod experiment;
pub mod fields;
pub mod korn;
pub mod quadrature;
pub mod scalar;
pub mod surface;
pub mod symmetry;
pub mod thin_domain;
pub mod verify;

pub use error::{Error, Result};

pub type Vec3 = nalgebra::Vector3<f64>;
pub type Mat3 = nalgebra::Matrix3<f64>;
