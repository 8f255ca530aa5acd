//! Domain types, measurement geometry and analytic reference models.

mod geometry;
mod grid;
mod map;
mod reflectivity;
mod sweep;

pub use geometry::{specular_path_length, BistaticGeometry, Vec3};
pub use grid::FrequencyGrid;
pub use map::ReflectivityMap;
pub use reflectivity::{from_db, from_dbsm, sphere_rcs_optical, to_db, to_dbsm, Reflectivity, SphereTarget};
pub use sweep::{ComplexSweep, SweepRole};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("invalid frequency grid: {0}")]
    InvalidGrid(String),
    #[error("index {index} out of range for grid of {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("invalid target: {0}")]
    InvalidTarget(String),
    #[error("sweep has {got} values but grid has {expected} points")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite sweep value at index {0}")]
    NonFinite(usize),
    #[error("frequency grids differ")]
    GridMismatch,
    #[error("invalid reflectivity: {0}")]
    InvalidReflectivity(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
}
