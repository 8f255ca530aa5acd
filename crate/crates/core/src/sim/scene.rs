use num_complex::Complex64;

use crate::model::{specular_path_length, BistaticGeometry, Vec3, SPEED_OF_LIGHT};

/// Where a scatterer sits, which fixes its excess path for each geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Placement {
    /// Fixed excess path in m, independent of the bistatic angle.
    ExcessPath(f64),
    /// Point scatterer at an offset from the focal point; gets the antenna
    /// pattern weighting of its off-boresight direction.
    Point(Vec3),
    /// Specular reflection off a sphere of the given radius at the focal
    /// point, following the geometric ridge model.
    SphereSpecular { radius: f64 },
    /// Direct Tx → Rx coupling.
    Direct,
}

impl Placement {
    pub fn excess_path(&self, geometry: &BistaticGeometry) -> f64 {
        match *self {
            Self::ExcessPath(l) => l,
            Self::Point(p) => geometry.excess_path_via(p),
            Self::SphereSpecular { radius } => {
                // the ridge model assumes one antenna radius; use the mean
                let r = 0.5 * (geometry.r_tx() + geometry.r_rx());
                specular_path_length(geometry.beta_deg(), radius, r)
            }
            Self::Direct => geometry.direct_excess_path(),
        }
    }

    pub fn excess_delay(&self, geometry: &BistaticGeometry) -> f64 {
        self.excess_path(geometry) / SPEED_OF_LIGHT
    }

    /// Off-boresight angles `((tx_h, tx_v), (rx_h, rx_v))` used for pattern
    /// weighting. Only point scatterers leave boresight.
    pub fn pattern_angles(&self, geometry: &BistaticGeometry) -> ((f64, f64), (f64, f64)) {
        match *self {
            Self::Point(p) => geometry.off_boresight_components(p),
            _ => ((0.0, 0.0), (0.0, 0.0)),
        }
    }
}

/// Piecewise-linear gain over bistatic angle, in dB.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularProfile {
    points: Vec<(f64, f64)>,
}

impl AngularProfile {
    /// `points` are `(beta_deg, gain_db)` with strictly increasing angles.
    pub fn new(points: Vec<(f64, f64)>) -> Option<Self> {
        let ok = !points.is_empty()
            && points.iter().all(|p| p.0.is_finite() && p.1.is_finite())
            && points.windows(2).all(|w| w[1].0 > w[0].0);
        ok.then_some(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Gain in dB, clamped to the end values outside the table.
    pub fn gain_db(&self, beta_deg: f64) -> f64 {
        let p = &self.points;
        if beta_deg <= p[0].0 {
            return p[0].1;
        }
        if beta_deg >= p[p.len() - 1].0 {
            return p[p.len() - 1].1;
        }
        let k = p.partition_point(|q| q.0 <= beta_deg);
        let (a, b) = (p[k - 1], p[k]);
        a.1 + (b.1 - a.1) * (beta_deg - a.0) / (b.0 - a.0)
    }

    pub fn amplitude(&self, beta_deg: f64) -> f64 {
        10f64.powf(self.gain_db(beta_deg) / 20.0)
    }
}

/// Discrete scatterer with complex reflectivity amplitude, `|a|² = σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Scatterer {
    pub placement: Placement,
    pub amplitude: Complex64,
    pub angular_profile: Option<AngularProfile>,
}

impl Scatterer {
    pub fn new(placement: Placement, amplitude: Complex64) -> Self {
        Self { placement, amplitude, angular_profile: None }
    }

    pub fn from_sigma(placement: Placement, sigma: f64, phase_deg: f64) -> Self {
        Self::new(placement, Complex64::from_polar(sigma.sqrt(), phase_deg.to_radians()))
    }

    /// Sphere of radius `radius` with its optical RCS on the specular ridge.
    pub fn sphere(radius: f64) -> Self {
        Self::from_sigma(
            Placement::SphereSpecular { radius },
            std::f64::consts::PI * radius * radius,
            0.0,
        )
    }

    pub fn with_profile(mut self, profile: AngularProfile) -> Self {
        self.angular_profile = Some(profile);
        self
    }

    /// Amplitude including the angular weighting at this geometry.
    pub fn amplitude_at(&self, geometry: &BistaticGeometry) -> Complex64 {
        match &self.angular_profile {
            Some(p) => self.amplitude * p.amplitude(geometry.beta_deg()),
            None => self.amplitude,
        }
    }
}

/// Discrete echo on the calibration (line-of-sight) link, relative to the
/// direct path: positioner reflections and similar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Echo {
    pub excess_path_m: f64,
    pub level_db: f64,
    pub phase_deg: f64,
}

impl Echo {
    pub fn factor(&self, f: f64) -> Complex64 {
        Complex64::from_polar(
            10f64.powf(self.level_db / 20.0),
            self.phase_deg.to_radians() - 2.0 * std::f64::consts::PI * f * self.excess_path_m / SPEED_OF_LIGHT,
        )
    }
}

/// Target scatterers, static background scatterers (pillar, crosstalk,
/// positioners) and echoes that also show up on the calibration link.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Scene {
    pub targets: Vec<Scatterer>,
    pub background: Vec<Scatterer>,
    pub calibration_echoes: Vec<Echo>,
}

impl Scene {
    /// Scene with the targets removed.
    pub fn background_only(&self) -> Self {
        Self { targets: Vec::new(), ..self.clone() }
    }

    /// A one-foot sphere on a foam pillar with antenna crosstalk, a reduced
    /// version of the measured chamber.
    pub fn default_sphere() -> Self {
        Self {
            targets: vec![Scatterer::sphere(0.1524)],
            background: vec![
                Scatterer::from_sigma(Placement::Point([0.0, 0.0, -0.35]), 10f64.powf(-4.0), 30.0),
                Scatterer::from_sigma(Placement::Direct, 10f64.powf(-4.5), 0.0),
            ],
            // positioner reflection, beyond the default calibration gate
            calibration_echoes: vec![Echo { excess_path_m: 3.0, level_db: -26.0, phase_deg: 0.0 }],
        }
    }
}
