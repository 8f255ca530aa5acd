use num_complex::Complex64;

use super::{FrequencyGrid, ModelError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepRole {
    Cal,
    Target,
    Background,
    Calibrated,
}

/// Complex S21 (or derived ratio) sampled on a frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSweep {
    grid: FrequencyGrid,
    values: Vec<Complex64>,
    role: SweepRole,
}

impl ComplexSweep {
    pub fn new(grid: FrequencyGrid, values: Vec<Complex64>, role: SweepRole) -> Result<Self, ModelError> {
        if values.len() != grid.len() {
            return Err(ModelError::LengthMismatch { expected: grid.len(), got: values.len() });
        }
        if let Some(i) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(ModelError::NonFinite(i));
        }
        Ok(Self { grid, values, role })
    }

    pub fn zeros(grid: FrequencyGrid, role: SweepRole) -> Self {
        Self { grid, values: vec![Complex64::new(0.0, 0.0); grid.len()], role }
    }

    pub fn from_fn(grid: FrequencyGrid, role: SweepRole, mut f: impl FnMut(usize, f64) -> Complex64) -> Result<Self, ModelError> {
        let values = (0..grid.len()).map(|i| f(i, grid.frequency(i))).collect();
        Self::new(grid, values, role)
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn role(&self) -> SweepRole {
        self.role
    }

    pub fn with_role(mut self, role: SweepRole) -> Self {
        self.role = role;
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `|S|²` per point, the power ratio `P_rx / P_tx`.
    pub fn power(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    pub fn ensure_same_grid(&self, other: &Self) -> Result<(), ModelError> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(ModelError::GridMismatch)
        }
    }

    /// Pointwise combination of two sweeps on the same grid.
    pub fn zip_with(
        &self,
        other: &Self,
        role: SweepRole,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self, ModelError> {
        self.ensure_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Self::new(self.grid, values, role)
    }

    pub fn map(&self, f: impl Fn(usize, Complex64) -> Complex64) -> Result<Self, ModelError> {
        let values = self.values.iter().enumerate().map(|(i, &v)| f(i, v)).collect();
        Self::new(self.grid, values, self.role)
    }

    pub fn scaled(&self, k: Complex64) -> Result<Self, ModelError> {
        self.map(|_, v| v * k)
    }

    /// In-place accumulation; grids must match.
    pub fn add_assign(&mut self, other: &Self) -> Result<(), ModelError> {
        self.ensure_same_grid(other)?;
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += b;
        }
        Ok(())
    }
}
