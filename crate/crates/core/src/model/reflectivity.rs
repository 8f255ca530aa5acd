use std::f64::consts::PI;

use super::{FrequencyGrid, ModelError, Vec3, SPEED_OF_LIGHT};

/// Power cross section in m², either constant over frequency or sampled on
/// a grid.
#[derive(Debug, Clone, PartialEq)]
pub enum Reflectivity {
    Flat(f64),
    PerFrequency(Vec<f64>),
}

impl Reflectivity {
    pub fn flat(sigma: f64) -> Result<Self, ModelError> {
        check_sigma(sigma, 0)?;
        Ok(Self::Flat(sigma))
    }

    pub fn per_frequency(sigma: Vec<f64>) -> Result<Self, ModelError> {
        for (i, &s) in sigma.iter().enumerate() {
            check_sigma(s, i)?;
        }
        Ok(Self::PerFrequency(sigma))
    }

    /// σ at grid index `i`. Flat values broadcast.
    pub fn at(&self, i: usize) -> f64 {
        match self {
            Self::Flat(s) => *s,
            Self::PerFrequency(v) => v[i],
        }
    }

    /// Checks that a per-frequency value matches the grid length.
    pub fn check_len(&self, n: usize) -> Result<(), ModelError> {
        match self {
            Self::PerFrequency(v) if v.len() != n => {
                Err(ModelError::LengthMismatch { expected: n, got: v.len() })
            }
            _ => Ok(()),
        }
    }

    pub fn values(&self, n: usize) -> Vec<f64> {
        (0..n).map(|i| self.at(i)).collect()
    }
}

fn check_sigma(s: f64, i: usize) -> Result<(), ModelError> {
    if !s.is_finite() || s < 0.0 {
        return Err(ModelError::InvalidReflectivity(format!("sigma[{i}] = {s} must be finite and >= 0")));
    }
    Ok(())
}

/// Conducting sphere, optionally displaced from the focal point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereTarget {
    radius: f64,
    position: Vec3,
}

impl SphereTarget {
    pub fn new(radius: f64) -> Result<Self, ModelError> {
        Self::at(radius, [0.0; 3])
    }

    pub fn at(radius: f64, position: Vec3) -> Result<Self, ModelError> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(ModelError::InvalidTarget(format!("radius must be positive, got {radius}")));
        }
        Ok(Self { radius, position })
    }

    /// 30 cm diameter sphere as quoted for the measured campaign.
    pub fn thirty_centimetre() -> Self {
        Self { radius: 0.15, position: [0.0; 3] }
    }

    /// One-foot (0.3048 m) diameter sphere used by the geometric ridge model.
    pub fn one_foot() -> Self {
        Self { radius: 0.1524, position: [0.0; 3] }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn diameter(&self) -> f64 {
        2.0 * self.radius
    }

    pub fn position(&self) -> Vec3 {
        self.position
    }

    /// Smallest electrical size `2πr/λ` over the grid.
    pub fn min_electrical_size(&self, grid: &FrequencyGrid) -> f64 {
        2.0 * PI * self.radius * grid.f_start() / SPEED_OF_LIGHT
    }

    /// Warning text when the optical approximation is questionable
    /// (`2πr/λ < 10` somewhere on the grid).
    pub fn optical_validity_warning(&self, grid: &FrequencyGrid) -> Option<String> {
        let ka = self.min_electrical_size(grid);
        (ka < 10.0).then(|| format!("sphere electrical size 2πr/λ = {ka:.2} < 10; optical RCS is inaccurate"))
    }
}

/// Optical-region RCS of a conducting sphere, `π r²`, frequency-flat.
pub fn sphere_rcs_optical(target: &SphereTarget) -> Reflectivity {
    Reflectivity::Flat(PI * target.radius * target.radius)
}

pub fn to_db(power_ratio: f64) -> f64 {
    10.0 * power_ratio.log10()
}

pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// `10 log10(σ / 1 m²)`.
pub fn to_dbsm(sigma: f64) -> f64 {
    to_db(sigma)
}

pub fn from_dbsm(dbsm: f64) -> f64 {
    from_db(dbsm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sphere_examples() {
        let s = sphere_rcs_optical(&SphereTarget::new(0.15).unwrap()).at(0);
        assert!((s - 0.070_685_835).abs() < 1e-9);
        assert!((to_dbsm(s) + 11.506_676).abs() < 1e-6);

        let s = sphere_rcs_optical(&SphereTarget::new(1.0 / PI.sqrt()).unwrap()).at(0);
        assert!((s - 1.0).abs() < 1e-15);
        assert!(to_dbsm(s).abs() < 1e-12);

        let s = sphere_rcs_optical(&SphereTarget::one_foot()).at(0);
        assert!((s - 0.072_965_877).abs() < 1e-9);
        assert!((to_dbsm(s) + 11.368_802).abs() < 1e-6);
    }

    #[test]
    fn sphere_is_deep_optical_in_band() {
        let t = SphereTarget::thirty_centimetre();
        let g = FrequencyGrid::default();
        assert!(t.min_electrical_size(&g) > 230.0);
        assert!(t.optical_validity_warning(&g).is_none());
        let small = SphereTarget::new(1e-3).unwrap();
        assert!(small.optical_validity_warning(&g).is_some());
    }

    #[test]
    fn invalid_inputs() {
        assert!(SphereTarget::new(0.0).is_err());
        assert!(Reflectivity::flat(-1.0).is_err());
        assert!(Reflectivity::per_frequency(vec![1.0, f64::NAN]).is_err());
        assert!(Reflectivity::flat(1.0).unwrap().check_len(5).is_ok());
        assert!(Reflectivity::PerFrequency(vec![1.0]).check_len(5).is_err());
    }

    proptest! {
        #[test]
        fn dbsm_round_trip(x in -200.0f64..200.0) {
            let back = to_dbsm(from_dbsm(x));
            prop_assert!((back - x).abs() <= 1e-12 * x.abs().max(1.0));
        }
    }
}
