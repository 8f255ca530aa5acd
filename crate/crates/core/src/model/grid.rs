use super::{ModelError, SPEED_OF_LIGHT};

/// Uniform frequency axis `f_start..=f_stop` with `n_points` samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyGrid {
    f_start: f64,
    f_stop: f64,
    n_points: usize,
}

impl FrequencyGrid {
    pub fn new(f_start: f64, f_stop: f64, n_points: usize) -> Result<Self, ModelError> {
        if !(f_start.is_finite() && f_stop.is_finite()) {
            return Err(ModelError::InvalidGrid("non-finite frequency bound".into()));
        }
        if f_start <= 0.0 {
            return Err(ModelError::InvalidGrid(format!("f_start must be positive, got {f_start}")));
        }
        if f_stop <= f_start {
            return Err(ModelError::InvalidGrid(format!(
                "f_stop ({f_stop}) must exceed f_start ({f_start})"
            )));
        }
        if n_points < 2 {
            return Err(ModelError::InvalidGrid(format!("need at least 2 points, got {n_points}")));
        }
        Ok(Self { f_start, f_stop, n_points })
    }

    pub fn f_start(&self) -> f64 {
        self.f_start
    }

    pub fn f_stop(&self) -> f64 {
        self.f_stop
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        (self.f_stop - self.f_start) / (self.n_points - 1) as f64
    }

    pub fn bandwidth(&self) -> f64 {
        self.f_stop - self.f_start
    }

    /// Frequency of sample `index`. The last sample is pinned to `f_stop`.
    pub fn frequency(&self, index: usize) -> f64 {
        if index + 1 == self.n_points {
            self.f_stop
        } else {
            self.f_start + index as f64 * self.step()
        }
    }

    pub fn frequencies(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n_points).map(|i| self.frequency(i))
    }

    pub fn wavelength(&self, index: usize) -> Result<f64, ModelError> {
        if index >= self.n_points {
            return Err(ModelError::IndexOutOfRange { index, len: self.n_points });
        }
        Ok(SPEED_OF_LIGHT / self.frequency(index))
    }

    /// Path-length spacing of one impulse-response bin, `c / (N Δf)`.
    pub fn range_bin(&self) -> f64 {
        SPEED_OF_LIGHT / (self.n_points as f64 * self.step())
    }

    /// Unambiguous path-length span of the impulse response, `c / Δf`.
    pub fn unambiguous_path(&self) -> f64 {
        SPEED_OF_LIGHT / self.step()
    }

    /// True when the two grids describe the same axis up to rounding of the
    /// bounds (1e-9 relative), which is what files round-tripped through
    /// text produce.
    pub fn approx_eq(&self, other: &Self) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs());
        self.n_points == other.n_points
            && close(self.f_start, other.f_start)
            && close(self.f_stop, other.f_stop)
    }

    /// Infers a uniform grid from explicit sample frequencies. Spacing must
    /// be uniform to 1e-6 of the nominal step.
    pub fn from_frequencies(freqs: &[f64]) -> Result<Self, ModelError> {
        if freqs.len() < 2 {
            return Err(ModelError::InvalidGrid(format!("need at least 2 points, got {}", freqs.len())));
        }
        let grid = Self::new(freqs[0], freqs[freqs.len() - 1], freqs.len())?;
        let step = grid.step();
        for (i, &f) in freqs.iter().enumerate() {
            if (f - grid.frequency(i)).abs() > 1e-6 * step {
                return Err(ModelError::InvalidGrid(format!(
                    "non-uniform spacing at point {i} ({f} Hz)"
                )));
            }
        }
        Ok(grid)
    }
}

impl Default for FrequencyGrid {
    /// 76 GHz to 81 GHz in 5 MHz steps.
    fn default() -> Self {
        Self { f_start: 76e9, f_stop: 81e9, n_points: 1001 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_matches_campaign() {
        let g = FrequencyGrid::default();
        assert_eq!(g.len(), 1001);
        assert!((g.step() - 5e6).abs() < 1e-3);
        assert_eq!(g.frequency(1000), 81e9);
        assert!((g.range_bin() - 0.059_898).abs() < 1e-5);
    }

    #[test]
    fn wavelength_examples() {
        let g = FrequencyGrid::new(SPEED_OF_LIGHT, 2.0 * SPEED_OF_LIGHT, 2).unwrap();
        assert_eq!(g.wavelength(0).unwrap(), 1.0);

        let g = FrequencyGrid::new(76e9, 81e9, 1001).unwrap();
        assert!((g.wavelength(0).unwrap() - 3.9446e-3).abs() < 1e-7);
        // 78.5 GHz is the band centre, index 500.
        assert!((g.wavelength(500).unwrap() - 3.8190e-3).abs() < 1e-7);
    }

    #[test]
    fn wavelength_rejects_out_of_range() {
        let g = FrequencyGrid::default();
        assert_eq!(
            g.wavelength(1001),
            Err(ModelError::IndexOutOfRange { index: 1001, len: 1001 })
        );
    }

    #[test]
    fn invalid_grids() {
        assert!(FrequencyGrid::new(0.0, 1.0, 10).is_err());
        assert!(FrequencyGrid::new(2.0, 1.0, 10).is_err());
        assert!(FrequencyGrid::new(1.0, 2.0, 1).is_err());
        assert!(FrequencyGrid::new(f64::NAN, 2.0, 3).is_err());
    }

    #[test]
    fn grid_is_strictly_increasing() {
        let g = FrequencyGrid::default();
        let f: Vec<f64> = g.frequencies().collect();
        assert!(f.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(FrequencyGrid::from_frequencies(&f).unwrap(), g);
    }

    #[test]
    fn from_frequencies_rejects_gaps() {
        assert!(FrequencyGrid::from_frequencies(&[1.0, 2.0, 4.0]).is_err());
    }
}
