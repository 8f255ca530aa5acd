//! Simulation and calibration toolkit for spherical bistatic radar
//! reflectivity measurements.
//!
//! The crate is organised as a pipeline:
//!
//! * [`model`] holds the value types (frequency grids, geometry, sweeps,
//!   reflectivity) and the analytic reference models.
//! * [`sim`] synthesises S21 sweeps from the free-space and bistatic radar
//!   link equations.
//! * [`calib`] contains the over-the-air deconvolution calibration and the
//!   classical substitution (Type-1/2/3) methods.
//! * [`dsp`] turns sweeps into impulse responses, power delay profiles and
//!   gated spectra.
//! * [`io`] reads and writes Touchstone files, campaign manifests, scene
//!   descriptions and heatmap CSVs.

pub mod calib;
pub mod dsp;
pub mod io;
pub mod model;
pub mod sim;

pub use model::{
    BistaticGeometry, ComplexSweep, FrequencyGrid, ModelError, Reflectivity, ReflectivityMap,
    SphereTarget, SweepRole, SPEED_OF_LIGHT,
};
