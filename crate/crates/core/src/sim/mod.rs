//! Forward model: synthetic calibration and radar S21 sweeps.
//!
//! The calibration link follows the extended free-space path-loss equation
//! and every scatterer follows the bistatic radar equation, both multiplied
//! by the complex system response. Complex values carry the square roots of
//! the power terms so that `|S|²` reproduces the link equations exactly.

mod antenna;
mod noise;
mod scene;
mod system;

use std::f64::consts::PI;

use num_complex::Complex64;

pub use antenna::AntennaPattern;
pub use noise::NoiseSpec;
pub use scene::{AngularProfile, Echo, Placement, Scatterer, Scene};
pub use system::{RippleSpec, SystemResponse};

use crate::model::{BistaticGeometry, ComplexSweep, FrequencyGrid, ModelError, Reflectivity, SweepRole, SPEED_OF_LIGHT};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("calibration link needs the anti-parallel geometry (beta = 180 deg), got {0} deg")]
    NotAntiParallel(f64),
    #[error("system response has {got} points, grid has {expected}")]
    SystemLength { expected: usize, got: usize },
}

/// Instrument state shared by every sweep of a campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSystem {
    pub grid: FrequencyGrid,
    pub sys: SystemResponse,
    pub tx: AntennaPattern,
    pub rx: AntennaPattern,
}

impl MeasurementSystem {
    pub fn new(grid: FrequencyGrid, sys: SystemResponse, tx: AntennaPattern, rx: AntennaPattern) -> Result<Self, SimError> {
        if sys.len() != grid.len() {
            return Err(SimError::SystemLength { expected: grid.len(), got: sys.len() });
        }
        Ok(Self { grid, sys, tx, rx })
    }

    /// Default horns with a 0 dB flat system.
    pub fn ideal(grid: FrequencyGrid) -> Self {
        let sys = SystemResponse::flat(&grid, 0.0);
        Self { grid, sys, tx: AntennaPattern::default(), rx: AntennaPattern::default() }
    }
}

fn propagation(f: f64, path: f64) -> Complex64 {
    Complex64::from_polar(1.0, -2.0 * PI * f * path / SPEED_OF_LIGHT)
}

/// Noise-free line-of-sight response, `S_cal(f)`.
fn fspl_values(ms: &MeasurementSystem, geometry: &BistaticGeometry) -> Vec<Complex64> {
    let focal = geometry.focal_path();
    ms.grid
        .frequencies()
        .enumerate()
        .map(|(i, f)| {
            let lambda = SPEED_OF_LIGHT / f;
            let antennas = ms.tx.response(f, 0.0, 0.0) * ms.rx.response(f, 0.0, 0.0);
            ms.sys.at(i) * antennas * (lambda / (4.0 * PI * focal)) * propagation(f, focal)
        })
        .collect()
}

/// Calibration sweep of the anti-parallel link without echoes or noise.
pub fn simulate_fspl_link(ms: &MeasurementSystem, geometry: &BistaticGeometry) -> Result<ComplexSweep, SimError> {
    check_anti_parallel(geometry)?;
    Ok(ComplexSweep::new(ms.grid, fspl_values(ms, geometry), SweepRole::Cal)?)
}

/// Calibration sweep with line-of-sight echoes and receiver noise.
pub fn simulate_calibration(
    ms: &MeasurementSystem,
    geometry: &BistaticGeometry,
    echoes: &[Echo],
    noise: &NoiseSpec,
) -> Result<ComplexSweep, SimError> {
    check_anti_parallel(geometry)?;
    let n = noise.samples(ms.grid.len());
    let values = fspl_values(ms, geometry)
        .into_iter()
        .zip(ms.grid.frequencies())
        .zip(n)
        .map(|((v, f), w)| v * (Complex64::new(1.0, 0.0) + echoes.iter().map(|e| e.factor(f)).sum::<Complex64>()) + w)
        .collect();
    Ok(ComplexSweep::new(ms.grid, values, SweepRole::Cal)?)
}

fn check_anti_parallel(geometry: &BistaticGeometry) -> Result<(), SimError> {
    if (geometry.beta_deg() - 180.0).abs() > 1e-9 {
        return Err(SimError::NotAntiParallel(geometry.beta_deg()));
    }
    Ok(())
}

/// Adds one bistatic radar return into `acc`.
fn accumulate_radar(
    acc: &mut [Complex64],
    ms: &MeasurementSystem,
    geometry: &BistaticGeometry,
    amplitude: impl Fn(usize) -> Complex64,
    excess_path: f64,
    angles: ((f64, f64), (f64, f64)),
) {
    let focal = geometry.focal_path();
    let spread = (4.0 * PI).powf(1.5) * geometry.r_tx() * geometry.r_rx();
    let ((tx_h, tx_v), (rx_h, rx_v)) = angles;
    for (i, f) in ms.grid.frequencies().enumerate() {
        let a = amplitude(i);
        if a == Complex64::new(0.0, 0.0) {
            continue;
        }
        let lambda = SPEED_OF_LIGHT / f;
        let antennas = ms.tx.response(f, tx_h, tx_v) * ms.rx.response(f, rx_h, rx_v);
        acc[i] += ms.sys.at(i) * antennas * (lambda / spread) * a * propagation(f, focal) * propagation(f, excess_path);
    }
}

/// Radar sweep of a single boresight point scatterer of cross section
/// `sigma`, delayed by `excess_delay_s` beyond the focal path.
pub fn simulate_radar_link(
    ms: &MeasurementSystem,
    geometry: &BistaticGeometry,
    sigma: &Reflectivity,
    excess_delay_s: f64,
) -> Result<ComplexSweep, SimError> {
    sigma.check_len(ms.grid.len())?;
    let mut acc = vec![Complex64::new(0.0, 0.0); ms.grid.len()];
    accumulate_radar(
        &mut acc,
        ms,
        geometry,
        |i| Complex64::new(sigma.at(i).sqrt(), 0.0),
        excess_delay_s * SPEED_OF_LIGHT,
        ((0.0, 0.0), (0.0, 0.0)),
    );
    Ok(ComplexSweep::new(ms.grid, acc, SweepRole::Target)?)
}

fn simulate_scatterers<'a>(
    ms: &MeasurementSystem,
    geometry: &BistaticGeometry,
    scatterers: impl Iterator<Item = &'a Scatterer>,
    noise: &NoiseSpec,
    role: SweepRole,
) -> Result<ComplexSweep, SimError> {
    let mut acc = noise.samples(ms.grid.len());
    for s in scatterers {
        let a = s.amplitude_at(geometry);
        accumulate_radar(
            &mut acc,
            ms,
            geometry,
            |_| a,
            s.placement.excess_path(geometry),
            s.placement.pattern_angles(geometry),
        );
    }
    Ok(ComplexSweep::new(ms.grid, acc, role)?)
}

/// Target measurement: coherent sum of all target and background
/// scatterers plus noise.
pub fn simulate_scene(
    ms: &MeasurementSystem,
    geometry: &BistaticGeometry,
    scene: &Scene,
    noise: &NoiseSpec,
) -> Result<ComplexSweep, SimError> {
    simulate_scatterers(ms, geometry, scene.targets.iter().chain(&scene.background), noise, SweepRole::Target)
}

/// Background measurement: the scene with its targets removed.
pub fn simulate_background(
    ms: &MeasurementSystem,
    geometry: &BistaticGeometry,
    scene: &Scene,
    noise: &NoiseSpec,
) -> Result<ComplexSweep, SimError> {
    simulate_scatterers(ms, geometry, scene.background.iter(), noise, SweepRole::Background)
}

#[cfg(test)]
mod tests {
    use super::*;

    const R: f64 = 3.04;

    /// Straight-line evaluation of the free-space link equation.
    fn fspl_oracle(g_sys: f64, g_tx: f64, g_rx: f64, f: f64, r_tx: f64, r_rx: f64) -> f64 {
        let lambda = 299_792_458.0 / f;
        g_sys * g_tx * g_rx * lambda * lambda / ((4.0 * PI).powi(2) * (r_tx + r_rx).powi(2))
    }

    /// Straight-line evaluation of the bistatic radar equation.
    fn radar_oracle(g_sys: f64, g_tx: f64, g_rx: f64, f: f64, sigma: f64, r_tx: f64, r_rx: f64) -> f64 {
        let lambda = 299_792_458.0 / f;
        g_sys * g_tx * g_rx * lambda * lambda * sigma / ((4.0 * PI).powi(3) * r_tx * r_tx * r_rx * r_rx)
    }

    fn centre_grid() -> FrequencyGrid {
        FrequencyGrid::new(78.5e9, 79.5e9, 3).unwrap()
    }

    #[test]
    fn fspl_example_value() {
        let ms = MeasurementSystem::ideal(centre_grid());
        let s = simulate_fspl_link(&ms, &BistaticGeometry::anti_parallel(R, R).unwrap()).unwrap();
        let p = s.power()[0];
        // frozen from the scalar oracle
        assert!((p - 2.498_476_136_616e-4).abs() < 1e-15);
        assert!((10.0 * p.log10() + 36.02).abs() < 5e-3);
        assert!((p / fspl_oracle(1.0, 10f64.powf(2.5), 10f64.powf(2.5), 78.5e9, R, R) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn radar_example_value() {
        let ms = MeasurementSystem::ideal(centre_grid());
        let g = BistaticGeometry::new(R, R, 60.0).unwrap();
        let sigma = Reflectivity::flat(0.070_686).unwrap();
        let s = simulate_radar_link(&ms, &g, &sigma, 0.0).unwrap();
        let p = s.power()[0];
        assert!((p - 6.082_915e-7).abs() < 1e-12);
        assert!((10.0 * p.log10() + 62.16).abs() < 5e-3);
        let cal = simulate_fspl_link(&ms, &BistaticGeometry::anti_parallel(R, R).unwrap()).unwrap();
        assert!((p / cal.power()[0] - 2.434_650e-3).abs() < 1e-8);
    }

    #[test]
    fn fspl_scales_with_system_gain_and_distance() {
        let grid = centre_grid();
        let ms = MeasurementSystem::ideal(grid);
        let ms4 = MeasurementSystem { sys: SystemResponse::flat(&grid, 10.0 * 4f64.log10()), ..ms.clone() };
        let g = BistaticGeometry::anti_parallel(R, R).unwrap();
        let a = simulate_fspl_link(&ms, &g).unwrap().power();
        let b = simulate_fspl_link(&ms4, &g).unwrap().power();
        let c = simulate_fspl_link(&ms, &BistaticGeometry::anti_parallel(2.0 * R, 2.0 * R).unwrap()).unwrap().power();
        for i in 0..3 {
            assert!((b[i] / a[i] - 4.0).abs() < 1e-14);
            assert!((c[i] / a[i] - 0.25).abs() < 1e-14);
        }
    }

    #[test]
    fn links_match_scalar_oracles_across_grid() {
        let grid = FrequencyGrid::default();
        let sys = SystemResponse::synthetic(&grid, 5, &RippleSpec::default());
        let tx = AntennaPattern { gain_slope_db_per_ghz: 0.3, ..Default::default() };
        let rx = AntennaPattern { boresight_gain_dbi: 22.0, ..Default::default() };
        let ms = MeasurementSystem::new(grid, sys.clone(), tx, rx).unwrap();
        let (r_tx, r_rx) = (3.04, 2.2);
        let cal = simulate_fspl_link(&ms, &BistaticGeometry::anti_parallel(r_tx, r_rx).unwrap()).unwrap();
        let radar = simulate_radar_link(&ms, &BistaticGeometry::new(r_tx, r_rx, 40.0).unwrap(), &Reflectivity::flat(0.3).unwrap(), 1e-9).unwrap();
        for (i, f) in grid.frequencies().enumerate() {
            let gs = sys.power_gain(i);
            let (gt, gr) = (tx.boresight_gain(f), rx.boresight_gain(f));
            let want = fspl_oracle(gs, gt, gr, f, r_tx, r_rx);
            assert!((cal.power()[i] / want - 1.0).abs() < 1e-14, "fspl {i}");
            let want = radar_oracle(gs, gt, gr, f, 0.3, r_tx, r_rx);
            assert!((radar.power()[i] / want - 1.0).abs() < 1e-14, "radar {i}");
        }
    }

    #[test]
    fn reciprocity_of_link_equations() {
        let grid = centre_grid();
        let tx = AntennaPattern::isotropic_gain(20.0);
        let rx = AntennaPattern::isotropic_gain(27.0);
        let a = MeasurementSystem::new(grid, SystemResponse::flat(&grid, -3.0), tx, rx).unwrap();
        let b = MeasurementSystem { tx: rx, rx: tx, ..a.clone() };
        let sigma = Reflectivity::flat(2.0).unwrap();
        let pa = simulate_radar_link(&a, &BistaticGeometry::new(2.0, 5.0, 30.0).unwrap(), &sigma, 0.0).unwrap();
        let pb = simulate_radar_link(&b, &BistaticGeometry::new(5.0, 2.0, 30.0).unwrap(), &sigma, 0.0).unwrap();
        let ca = simulate_fspl_link(&a, &BistaticGeometry::anti_parallel(2.0, 5.0).unwrap()).unwrap();
        let cb = simulate_fspl_link(&b, &BistaticGeometry::anti_parallel(5.0, 2.0).unwrap()).unwrap();
        for i in 0..3 {
            assert!((pa.power()[i] / pb.power()[i] - 1.0).abs() < 1e-14);
            assert!((ca.power()[i] / cb.power()[i] - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_sigma_gives_zero_sweep() {
        let ms = MeasurementSystem::ideal(centre_grid());
        let s = simulate_radar_link(&ms, &BistaticGeometry::new(R, R, 10.0).unwrap(), &Reflectivity::flat(0.0).unwrap(), 0.0).unwrap();
        assert!(s.values().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn non_positive_radius_and_wrong_geometry_rejected() {
        assert!(BistaticGeometry::anti_parallel(0.0, R).is_err());
        let ms = MeasurementSystem::ideal(centre_grid());
        assert_eq!(
            simulate_fspl_link(&ms, &BistaticGeometry::new(R, R, 90.0).unwrap()),
            Err(SimError::NotAntiParallel(90.0))
        );
    }

    #[test]
    fn scene_base_cases() {
        let grid = FrequencyGrid::default();
        let ms = MeasurementSystem::ideal(grid);
        let g = BistaticGeometry::new(R, R, 45.0).unwrap();
        let empty = simulate_scene(&ms, &g, &Scene::default(), &NoiseSpec::off()).unwrap();
        assert!(empty.values().iter().all(|v| v.norm() == 0.0));

        let tau = 2.5e-9;
        let one = Scene {
            targets: vec![Scatterer::from_sigma(Placement::ExcessPath(tau * SPEED_OF_LIGHT), 0.5, 0.0)],
            ..Default::default()
        };
        let s = simulate_scene(&ms, &g, &one, &NoiseSpec::off()).unwrap();
        let r = simulate_radar_link(&ms, &g, &Reflectivity::flat(0.5).unwrap(), tau).unwrap();
        for (a, b) in s.values().iter().zip(r.values()) {
            assert!((a - b).norm() <= 1e-12 * b.norm());
        }
    }

    #[test]
    fn two_path_ripple_matches_closed_form() {
        let grid = FrequencyGrid::default();
        let ms = MeasurementSystem::ideal(grid);
        let g = BistaticGeometry::new(R, R, 45.0).unwrap();
        let (tau, delta) = (1e-9, 0.8e-9);
        let s = Scatterer::from_sigma(Placement::ExcessPath(tau * SPEED_OF_LIGHT), 1.0, 0.0);
        let t = Scatterer::from_sigma(Placement::ExcessPath((tau + delta) * SPEED_OF_LIGHT), 1.0, 0.0);
        let scene = Scene { targets: vec![s.clone(), t], ..Default::default() };
        let two = simulate_scene(&ms, &g, &scene, &NoiseSpec::off()).unwrap();
        let single = simulate_scene(&ms, &g, &Scene { targets: vec![s], ..Default::default() }, &NoiseSpec::off()).unwrap();
        for (i, f) in grid.frequencies().enumerate() {
            let ratio = two.values()[i].norm() / single.values()[i].norm();
            let want = (Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, -2.0 * PI * f * delta)).norm();
            assert!((ratio - want).abs() < 1e-9, "bin {i}");
        }
    }

    #[test]
    fn background_is_scene_without_targets() {
        let grid = FrequencyGrid::default();
        let ms = MeasurementSystem::ideal(grid);
        let g = BistaticGeometry::new(R, R, 100.0).unwrap();
        let scene = Scene::default_sphere();
        let noise = NoiseSpec::new(-90.0, 1);
        let b = simulate_background(&ms, &g, &scene, &noise).unwrap();
        let s = simulate_scene(&ms, &g, &scene.background_only(), &noise).unwrap();
        assert_eq!(b.values(), s.values());
        let none = Scene { background: vec![], ..scene };
        let z = simulate_background(&ms, &g, &none, &NoiseSpec::off()).unwrap();
        assert!(z.values().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn calibration_echo_appears_relative_to_los() {
        let grid = FrequencyGrid::default();
        let ms = MeasurementSystem::ideal(grid);
        let g = BistaticGeometry::anti_parallel(R, R).unwrap();
        let plain = simulate_fspl_link(&ms, &g).unwrap();
        let echo = Echo { excess_path_m: 1.5, level_db: -26.0, phase_deg: 0.0 };
        let with = simulate_calibration(&ms, &g, &[echo], &NoiseSpec::off()).unwrap();
        for (i, f) in grid.frequencies().enumerate() {
            let r = with.values()[i] / plain.values()[i];
            assert!((r - (Complex64::new(1.0, 0.0) + echo.factor(f))).norm() < 1e-12);
        }
    }
}
