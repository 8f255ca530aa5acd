use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{FrequencyGrid, ModelError};

/// Complex frequency response of everything between the antenna
/// connectors: cables, converters, instrument. `|g|²` is the power gain.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemResponse {
    values: Vec<Complex64>,
}

/// Parameters of the synthetic smooth system ripple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RippleSpec {
    pub min_terms: usize,
    pub max_terms: usize,
    /// Largest |magnitude| deviation from `level_db`, in dB.
    pub excursion_db: f64,
    /// Highest ripple rate in cycles across the band.
    pub max_cycles: f64,
    pub level_db: f64,
}

impl Default for RippleSpec {
    fn default() -> Self {
        Self { min_terms: 3, max_terms: 8, excursion_db: 6.0, max_cycles: 6.0, level_db: 0.0 }
    }
}

impl SystemResponse {
    pub fn new(values: Vec<Complex64>) -> Result<Self, ModelError> {
        for (i, v) in values.iter().enumerate() {
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(ModelError::NonFinite(i));
            }
            if v.norm() == 0.0 {
                return Err(ModelError::InvalidReflectivity(format!("system gain vanishes at index {i}")));
            }
        }
        Ok(Self { values })
    }

    pub fn flat(grid: &FrequencyGrid, gain_db: f64) -> Self {
        let v = Complex64::new(10f64.powf(gain_db / 20.0), 0.0);
        Self { values: vec![v; grid.len()] }
    }

    /// Smooth seeded ripple: `1 + a Σ c_k e^{j2πν_k x}` over normalised
    /// frequency `x ∈ [0, 1]`, with 3–8 terms of random complex weight and
    /// rate `|ν_k| ≤ max_cycles`. The scale `a` is solved so the peak
    /// magnitude deviation is exactly `excursion_db`, which also keeps the
    /// gain away from zero.
    pub fn synthetic(grid: &FrequencyGrid, seed: u64, spec: &RippleSpec) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let terms = rng.random_range(spec.min_terms..=spec.max_terms.max(spec.min_terms));
        let comps: Vec<(Complex64, f64)> = (0..terms)
            .map(|_| {
                let w = Complex64::from_polar(rng.random_range(0.2..1.0), rng.random_range(0.0..2.0 * PI));
                let nu = rng.random_range(-spec.max_cycles..spec.max_cycles);
                (w, nu)
            })
            .collect();
        let offset_phase = rng.random_range(0.0..2.0 * PI);
        let n = grid.len();
        let z: Vec<Complex64> = (0..n)
            .map(|i| {
                let x = if n > 1 { i as f64 / (n - 1) as f64 } else { 0.0 };
                comps.iter().map(|&(w, nu)| w * Complex64::from_polar(1.0, 2.0 * PI * nu * x)).sum()
            })
            .collect();
        let deviation = |a: f64| {
            z.iter().map(|v| (20.0 * (Complex64::new(1.0, 0.0) + v * a).norm().log10()).abs()).fold(0.0, f64::max)
        };
        let target = spec.excursion_db;
        let scale = if target > 0.0 && z.iter().any(|v| v.norm() > 0.0) {
            // deviation(0) = 0 and grows without bound near a zero of the gain
            let (mut lo, mut hi) = (0.0, 1.0);
            while deviation(hi) < target {
                lo = hi;
                hi *= 2.0;
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if deviation(mid) < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        } else {
            0.0
        };
        let level = Complex64::from_polar(10f64.powf(spec.level_db / 20.0), offset_phase);
        let values = z.into_iter().map(|v| (Complex64::new(1.0, 0.0) + v * scale) * level).collect();
        Self { values }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn at(&self, i: usize) -> Complex64 {
        self.values[i]
    }

    /// Power gain `|g|²` at index `i`.
    pub fn power_gain(&self, i: usize) -> f64 {
        self.values[i].norm_sqr()
    }

    /// Applies a common multiplicative response, e.g. a drift or cable swap.
    pub fn multiplied(&self, h: &[Complex64]) -> Result<Self, ModelError> {
        if h.len() != self.values.len() {
            return Err(ModelError::LengthMismatch { expected: self.values.len(), got: h.len() });
        }
        Self::new(self.values.iter().zip(h).map(|(a, b)| a * b).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_ripple_hits_excursion() {
        let g = FrequencyGrid::default();
        for seed in 0..20 {
            let s = SystemResponse::synthetic(&g, seed, &RippleSpec::default());
            let db: Vec<f64> = (0..g.len()).map(|i| 10.0 * s.power_gain(i).log10()).collect();
            let peak = db.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            assert!((peak - 6.0).abs() < 1e-9, "seed {seed}: {peak}");
        }
    }

    #[test]
    fn synthetic_ripple_is_seeded() {
        let g = FrequencyGrid::default();
        let spec = RippleSpec::default();
        assert_eq!(SystemResponse::synthetic(&g, 7, &spec), SystemResponse::synthetic(&g, 7, &spec));
        assert_ne!(SystemResponse::synthetic(&g, 7, &spec), SystemResponse::synthetic(&g, 8, &spec));
    }

    #[test]
    fn zero_gain_is_rejected() {
        assert!(SystemResponse::new(vec![Complex64::new(0.0, 0.0)]).is_err());
    }
}
