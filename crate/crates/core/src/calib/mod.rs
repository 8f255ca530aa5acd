//! Calibration algorithms.
//!
//! [`ota_calibrate`] is the over-the-air deconvolution: the radar sweep is
//! divided by a direct antenna-to-antenna sweep taken in the anti-parallel
//! position, which removes the system and antenna responses and unwinds the
//! propagation delay to the focal point. The substitution methods
//! ([`type1_calibrate`], [`type2_calibrate`], [`type3_calibrate`]) calibrate
//! against reference objects of known response.

mod ota;
mod polarimetric;
mod substitution;

pub use ota::{
    background_subtract, equal_radii_scale, ota_calibrate, ota_calibrate_with, ota_scale, CalibratedReflectivity,
    CalibrationMethod,
};
pub use polarimetric::{
    condition_number, type2_calibrate, type3_calibrate, DistortionMatrix, ScatteringMatrix2x2, MAX_CONDITION,
};
pub use substitution::{type1_calibrate, type1_calibrate_with};

use num_complex::Complex64;

use crate::model::ModelError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CalibError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(
        "denominator at {frequency_hz} Hz (index {index}) is {margin_db:.1} dB below the divide floor; \
         gate the calibration sweep or enable regularisation"
    )]
    DivideFloor { index: usize, frequency_hz: f64, margin_db: f64 },
    #[error("distortion entry {channel} vanishes at {frequency_hz} Hz (index {index})")]
    SingularDistortion { index: usize, frequency_hz: f64, channel: usize },
    #[error("distortion matrix ill-conditioned at {frequency_hz} Hz (index {index}): condition number {condition:e}")]
    IllConditioned { index: usize, frequency_hz: f64, condition: f64 },
    #[error("distortion matrix has {got} frequency entries, expected 1 or {expected}")]
    DistortionLength { expected: usize, got: usize },
    #[error("invalid argument: {0}")]
    Invalid(String),
}

/// How complex division treats small denominators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivisionPolicy {
    /// Refuse points where `|d| < floor_rel · max|d|`.
    pub floor_rel: f64,
    /// Tikhonov parameter relative to `max|d|`; when set the floor check is
    /// skipped and `n/d` becomes `n·conj(d) / (|d|² + ε²)`.
    pub regularization: Option<f64>,
}

impl Default for DivisionPolicy {
    fn default() -> Self {
        Self { floor_rel: 1e-6, regularization: None }
    }
}

impl DivisionPolicy {
    pub fn regularized(eps_rel: f64) -> Self {
        Self { regularization: Some(eps_rel), ..Self::default() }
    }

    /// Pointwise `num / den` under this policy; `freq` maps an index to Hz
    /// for error reports.
    pub(crate) fn divide(
        &self,
        num: &[Complex64],
        den: &[Complex64],
        freq: impl Fn(usize) -> f64,
    ) -> Result<Vec<Complex64>, CalibError> {
        let peak = den.iter().map(|d| d.norm()).fold(0.0, f64::max);
        if let Some(eps_rel) = self.regularization {
            let eps2 = (eps_rel * peak).powi(2);
            return Ok(num
                .iter()
                .zip(den)
                .map(|(n, d)| {
                    let p = d.norm_sqr() + eps2;
                    if p == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        n * d.conj() / p
                    }
                })
                .collect());
        }
        let floor = self.floor_rel * peak;
        for (i, d) in den.iter().enumerate() {
            let m = d.norm();
            if m < floor || m == 0.0 {
                let margin_db = if m == 0.0 { f64::NEG_INFINITY } else { 20.0 * (m / floor).log10() };
                return Err(CalibError::DivideFloor { index: i, frequency_hz: freq(i), margin_db });
            }
        }
        Ok(num.iter().zip(den).map(|(n, d)| n / d).collect())
    }
}
