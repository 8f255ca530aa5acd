use std::f64::consts::PI;

use num_complex::Complex64;

use super::{CalibError, DivisionPolicy};
use crate::model::{ComplexSweep, FrequencyGrid, ModelError, SweepRole};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CalibrationMethod {
    OverTheAir,
    Type1,
    Type2,
    Type3,
}

/// Complex reflectivity amplitude per frequency, `|a|² = σ` in m².
#[derive(Debug, Clone, PartialEq)]
pub struct CalibratedReflectivity {
    sweep: ComplexSweep,
    r_tx: f64,
    r_rx: f64,
    method: CalibrationMethod,
    regularization: Option<f64>,
}

impl CalibratedReflectivity {
    pub fn grid(&self) -> &FrequencyGrid {
        self.sweep.grid()
    }

    pub fn amplitude(&self) -> &[Complex64] {
        self.sweep.values()
    }

    pub fn sigma(&self) -> Vec<f64> {
        self.sweep.power()
    }

    pub fn sigma_dbsm(&self) -> Vec<f64> {
        self.sigma().into_iter().map(crate::model::to_dbsm).collect()
    }

    pub fn radii(&self) -> (f64, f64) {
        (self.r_tx, self.r_rx)
    }

    pub fn method(&self) -> CalibrationMethod {
        self.method
    }

    pub fn regularization(&self) -> Option<f64> {
        self.regularization
    }

    pub fn as_sweep(&self) -> &ComplexSweep {
        &self.sweep
    }

    pub fn into_sweep(self) -> ComplexSweep {
        self.sweep
    }
}

/// Coherent subtraction of a target-absent measurement.
pub fn background_subtract(measured: &ComplexSweep, background: &ComplexSweep) -> Result<ComplexSweep, ModelError> {
    measured.zip_with(background, measured.role(), |m, b| m - b)
}

/// Amplitude scale `sqrt(4π) R_tx R_rx / (R_tx + R_rx)` that turns the
/// radar/calibration ratio into a reflectivity amplitude.
pub fn ota_scale(r_tx: f64, r_rx: f64) -> f64 {
    (4.0 * PI).sqrt() * r_tx * r_rx / (r_tx + r_rx)
}

/// Equal-radii form of [`ota_scale`], `sqrt(π) R`.
pub fn equal_radii_scale(r: f64) -> f64 {
    PI.sqrt() * r
}

/// Over-the-air calibration with the default divide floor.
pub fn ota_calibrate(
    radar: &ComplexSweep,
    cal: &ComplexSweep,
    r_tx: f64,
    r_rx: f64,
) -> Result<CalibratedReflectivity, CalibError> {
    ota_calibrate_with(radar, cal, r_tx, r_rx, &DivisionPolicy::default())
}

/// Divides `radar` by the (preferably gated) anti-parallel `cal` sweep and
/// scales to reflectivity amplitude. Works for unequal aperture radii.
pub fn ota_calibrate_with(
    radar: &ComplexSweep,
    cal: &ComplexSweep,
    r_tx: f64,
    r_rx: f64,
    policy: &DivisionPolicy,
) -> Result<CalibratedReflectivity, CalibError> {
    if !(r_tx.is_finite() && r_tx > 0.0 && r_rx.is_finite() && r_rx > 0.0) {
        return Err(CalibError::Invalid(format!("radii must be positive (r_tx={r_tx}, r_rx={r_rx})")));
    }
    radar.ensure_same_grid(cal)?;
    let grid = *radar.grid();
    let scale = if r_tx == r_rx { equal_radii_scale(r_tx) } else { ota_scale(r_tx, r_rx) };
    let ratio = policy.divide(radar.values(), cal.values(), |i| grid.frequency(i))?;
    let values = ratio.into_iter().map(|v| v * scale).collect();
    Ok(CalibratedReflectivity {
        sweep: ComplexSweep::new(grid, values, SweepRole::Calibrated)?,
        r_tx,
        r_rx,
        method: CalibrationMethod::OverTheAir,
        regularization: policy.regularization,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BistaticGeometry, Reflectivity};
    use crate::sim::{
        simulate_fspl_link, simulate_radar_link, AntennaPattern, MeasurementSystem, RippleSpec, SystemResponse,
    };
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    const R: f64 = 3.04;

    fn rippled_system(seed: u64) -> MeasurementSystem {
        let grid = FrequencyGrid::default();
        MeasurementSystem::new(
            grid,
            SystemResponse::synthetic(&grid, seed, &RippleSpec::default()),
            AntennaPattern { feed_delay_s: 0.2e-9, ..Default::default() },
            AntennaPattern { gain_slope_db_per_ghz: -0.4, ..Default::default() },
        )
        .unwrap()
    }

    #[test]
    fn unit_ratio_gives_pi_r_squared() {
        let grid = FrequencyGrid::new(76e9, 81e9, 11).unwrap();
        let s = ComplexSweep::from_fn(grid, SweepRole::Cal, |i, _| Complex64::from_polar(1e-2, i as f64)).unwrap();
        let out = ota_calibrate(&s, &s, R, R).unwrap();
        for &sigma in &out.sigma() {
            assert!((sigma - 29.033_342_667_415_43).abs() < 1e-12);
        }
        assert!((out.sigma_dbsm()[0] - 14.63).abs() < 5e-3);
        assert_eq!(out.method(), CalibrationMethod::OverTheAir);
    }

    #[test]
    fn unequal_radii_scale() {
        let grid = FrequencyGrid::new(76e9, 81e9, 5).unwrap();
        let s = ComplexSweep::from_fn(grid, SweepRole::Cal, |_, _| Complex64::new(0.3, -0.1)).unwrap();
        let out = ota_calibrate(&s, &s, 3.04, 1.52).unwrap();
        assert!((out.sigma()[2] - 12.903_707_852_184_64).abs() < 1e-10);
    }

    proptest! {
        #[test]
        fn equal_radii_identity(r in 1e-3f64..1e3) {
            let a = ota_scale(r, r);
            let b = equal_radii_scale(r);
            prop_assert!((a - b).abs() <= 4.0 * f64::EPSILON * b);
        }
    }

    #[test]
    fn forward_round_trip_recovers_sigma() {
        let sigma0 = 0.070_686;
        for &(r_tx, r_rx) in &[(R, R), (3.04, 1.52)] {
            let ms = rippled_system(3);
            let cal = simulate_fspl_link(&ms, &BistaticGeometry::anti_parallel(r_tx, r_rx).unwrap()).unwrap();
            let radar = simulate_radar_link(&ms, &BistaticGeometry::new(r_tx, r_rx, 70.0).unwrap(), &Reflectivity::flat(sigma0).unwrap(), 0.0).unwrap();
            let out = ota_calibrate(&radar, &cal, r_tx, r_rx).unwrap();
            for (i, s) in out.sigma().into_iter().enumerate() {
                assert!((s / sigma0 - 1.0).abs() < 1e-10, "({r_tx},{r_rx}) bin {i}: {s}");
            }
            // focal-point target comes out frequency-flat and real
            for a in out.amplitude() {
                assert!(a.im.abs() < 1e-9 * a.re.abs());
            }
        }
    }

    #[test]
    fn common_response_cancels() {
        let ms = rippled_system(9);
        let cal = simulate_fspl_link(&ms, &BistaticGeometry::anti_parallel(R, R).unwrap()).unwrap();
        let radar = simulate_radar_link(&ms, &BistaticGeometry::new(R, R, 20.0).unwrap(), &Reflectivity::flat(1.0).unwrap(), 3e-10).unwrap();
        let base = ota_calibrate(&radar, &cal, R, R).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let h: Vec<Complex64> = (0..cal.len()).map(|_| Complex64::from_polar(rng.random_range(0.1..10.0), rng.random_range(-3.0..3.0))).collect();
        let cal_h = cal.map(|i, v| v * h[i]).unwrap();
        let radar_h = radar.map(|i, v| v * h[i]).unwrap();
        let out = ota_calibrate(&radar_h, &cal_h, R, R).unwrap();
        for (a, b) in out.amplitude().iter().zip(base.amplitude()) {
            assert!((a - b).norm() <= 1e-12 * b.norm());
        }
    }

    #[test]
    fn calibrating_twice_is_dividing_twice() {
        let ms = rippled_system(4);
        let cal = simulate_fspl_link(&ms, &BistaticGeometry::anti_parallel(R, R).unwrap()).unwrap();
        let radar = simulate_radar_link(&ms, &BistaticGeometry::new(R, R, 20.0).unwrap(), &Reflectivity::flat(1.0).unwrap(), 0.0).unwrap();
        let once = ota_calibrate(&radar, &cal, R, R).unwrap();
        let twice = ota_calibrate(once.as_sweep(), &cal, R, R).unwrap();
        let k = equal_radii_scale(R);
        for i in 0..cal.len() {
            let want = radar.values()[i] / cal.values()[i] / cal.values()[i] * k * k;
            assert!((twice.amplitude()[i] - want).norm() <= 1e-12 * want.norm());
        }
        // no hidden state: repeating gives identical output
        assert_eq!(ota_calibrate(&radar, &cal, R, R).unwrap(), once);
    }

    #[test]
    fn notched_calibration_is_refused() {
        let grid = FrequencyGrid::new(76e9, 81e9, 4).unwrap();
        let cal = ComplexSweep::new(
            grid,
            vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(1e-8, 0.0), Complex64::new(1.0, 0.0)],
            SweepRole::Cal,
        )
        .unwrap();
        let err = ota_calibrate(&cal, &cal, R, R).unwrap_err();
        assert!(matches!(err, CalibError::DivideFloor { index: 2, .. }));
        let ok = ota_calibrate_with(&cal, &cal, R, R, &DivisionPolicy::regularized(1e-3)).unwrap();
        assert_eq!(ok.regularization(), Some(1e-3));
    }

    #[test]
    fn background_subtraction_basics() {
        let grid = FrequencyGrid::new(76e9, 81e9, 4).unwrap();
        let m = ComplexSweep::from_fn(grid, SweepRole::Target, |i, _| Complex64::new(i as f64, 1.0)).unwrap();
        let zero = ComplexSweep::zeros(grid, SweepRole::Background);
        assert!(background_subtract(&m, &m).unwrap().values().iter().all(|v| v.norm() == 0.0));
        assert_eq!(background_subtract(&m, &zero).unwrap(), m);
        let other = ComplexSweep::zeros(FrequencyGrid::new(76e9, 81e9, 5).unwrap(), SweepRole::Background);
        assert_eq!(background_subtract(&m, &other), Err(ModelError::GridMismatch));
    }
}
