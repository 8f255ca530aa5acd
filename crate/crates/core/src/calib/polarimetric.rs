use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use super::CalibError;
use crate::model::{FrequencyGrid, ModelError};

/// Polarimetric scattering matrix per frequency.
///
/// Channel names are receive-then-transmit: `vh` is received V for
/// transmitted H. The vectorised order used by the distortion matrices is
/// column-stacked `[HH, VH, HV, VV]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringMatrix2x2 {
    grid: FrequencyGrid,
    channels: [Vec<Complex64>; 4],
}

impl ScatteringMatrix2x2 {
    pub fn new(
        grid: FrequencyGrid,
        hh: Vec<Complex64>,
        vh: Vec<Complex64>,
        hv: Vec<Complex64>,
        vv: Vec<Complex64>,
    ) -> Result<Self, ModelError> {
        for ch in [&hh, &vh, &hv, &vv] {
            if ch.len() != grid.len() {
                return Err(ModelError::LengthMismatch { expected: grid.len(), got: ch.len() });
            }
        }
        Ok(Self { grid, channels: [hh, vh, hv, vv] })
    }

    pub fn zeros(grid: FrequencyGrid) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); grid.len()];
        Self { grid, channels: [z.clone(), z.clone(), z.clone(), z] }
    }

    /// Builds from per-frequency vectors in `[HH, VH, HV, VV]` order.
    pub fn from_vectors(grid: FrequencyGrid, vectors: &[[Complex64; 4]]) -> Result<Self, ModelError> {
        if vectors.len() != grid.len() {
            return Err(ModelError::LengthMismatch { expected: grid.len(), got: vectors.len() });
        }
        let ch = |k: usize| vectors.iter().map(|v| v[k]).collect::<Vec<_>>();
        Ok(Self { grid, channels: [ch(0), ch(1), ch(2), ch(3)] })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn hh(&self) -> &[Complex64] {
        &self.channels[0]
    }

    pub fn vh(&self) -> &[Complex64] {
        &self.channels[1]
    }

    pub fn hv(&self) -> &[Complex64] {
        &self.channels[2]
    }

    pub fn vv(&self) -> &[Complex64] {
        &self.channels[3]
    }

    pub fn vector(&self, i: usize) -> [Complex64; 4] {
        [self.channels[0][i], self.channels[1][i], self.channels[2][i], self.channels[3][i]]
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn minus(&self, other: &Self) -> Result<Vec<[Complex64; 4]>, ModelError> {
        if self.grid != other.grid {
            return Err(ModelError::GridMismatch);
        }
        Ok((0..self.len())
            .map(|i| {
                let (a, b) = (self.vector(i), other.vector(i));
                [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
            })
            .collect())
    }

    /// Largest channel-wise difference relative to the largest magnitude.
    pub fn max_relative_difference(&self, other: &Self) -> f64 {
        let scale = self.channels.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
        let diff = self
            .channels
            .iter()
            .zip(&other.channels)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).norm()))
            .fold(0.0, f64::max);
        if scale == 0.0 {
            diff
        } else {
            diff / scale
        }
    }
}

/// Antenna polarisation distortion `C` with `vec(M - B) = C vec(S)`.
///
/// Either the Type-2 diagonal `[R_HH T_HH, R_VV T_HH, R_HH T_VV, R_VV T_VV]`
/// or a full 4×4 Type-3 matrix. One entry is broadcast over frequency,
/// otherwise there must be one per grid point.
#[derive(Debug, Clone, PartialEq)]
pub enum DistortionMatrix {
    Diagonal(Vec<[Complex64; 4]>),
    Full(Vec<Matrix4<Complex64>>),
}

impl DistortionMatrix {
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        Self::Diagonal(vec![[one; 4]])
    }

    /// Frequency-flat Type-2 matrix from the co-polar distortion factors.
    pub fn type2(r_hh: Complex64, t_hh: Complex64, r_vv: Complex64, t_vv: Complex64) -> Self {
        Self::Diagonal(vec![[r_hh * t_hh, r_vv * t_hh, r_hh * t_vv, r_vv * t_vv]])
    }

    /// Frequency-flat Type-3 matrix from full receive and transmit
    /// distortion matrices `[[HH, HV], [VH, VV]]`; this is `T ⊗ R`.
    pub fn type3(r: [[Complex64; 2]; 2], t: [[Complex64; 2]; 2]) -> Self {
        let mut c = Matrix4::zeros();
        for i in 0..2 {
            for k in 0..2 {
                for j in 0..2 {
                    for l in 0..2 {
                        c[(2 * i + k, 2 * j + l)] = t[i][j] * r[k][l];
                    }
                }
            }
        }
        Self::Full(vec![c])
    }

    pub fn as_full(&self) -> Self {
        match self {
            Self::Full(_) => self.clone(),
            Self::Diagonal(d) => Self::Full(d.iter().map(|e| Matrix4::from_diagonal(&Vector4::from(*e))).collect()),
        }
    }

    pub fn scaled(&self, k: Complex64) -> Self {
        match self {
            Self::Diagonal(d) => Self::Diagonal(d.iter().map(|e| e.map(|v| v * k)).collect()),
            Self::Full(m) => Self::Full(m.iter().map(|e| e * k).collect()),
        }
    }

    fn entries(&self) -> usize {
        match self {
            Self::Diagonal(d) => d.len(),
            Self::Full(m) => m.len(),
        }
    }

    fn check_len(&self, n: usize) -> Result<(), CalibError> {
        let got = self.entries();
        if got == 1 || got == n {
            Ok(())
        } else {
            Err(CalibError::DistortionLength { expected: n, got })
        }
    }

    fn matrix(&self, i: usize) -> Matrix4<Complex64> {
        match self {
            Self::Diagonal(d) => Matrix4::from_diagonal(&Vector4::from(d[i.min(d.len() - 1)])),
            Self::Full(m) => m[i.min(m.len() - 1)],
        }
    }

    /// Forward model: `vec(S) ↦ C vec(S) + vec(B)`.
    pub fn distort(&self, s: &ScatteringMatrix2x2, background: &ScatteringMatrix2x2) -> Result<ScatteringMatrix2x2, CalibError> {
        self.check_len(s.len())?;
        if s.grid != background.grid {
            return Err(ModelError::GridMismatch.into());
        }
        let out: Vec<[Complex64; 4]> = (0..s.len())
            .map(|i| {
                let v = self.matrix(i) * Vector4::from(s.vector(i)) + Vector4::from(background.vector(i));
                [v[0], v[1], v[2], v[3]]
            })
            .collect();
        Ok(ScatteringMatrix2x2::from_vectors(s.grid, &out)?)
    }
}

/// Type-2 calibration: channel-wise division of `M - B` by the diagonal of
/// `C`.
pub fn type2_calibrate(
    measured: &ScatteringMatrix2x2,
    background: &ScatteringMatrix2x2,
    c: &DistortionMatrix,
) -> Result<ScatteringMatrix2x2, CalibError> {
    let DistortionMatrix::Diagonal(diag) = c else {
        return Err(CalibError::Invalid("Type-2 calibration needs a diagonal distortion matrix".into()));
    };
    c.check_len(measured.len())?;
    let diff = measured.minus(background)?;
    let grid = measured.grid;
    let mut out = Vec::with_capacity(diff.len());
    for (i, v) in diff.iter().enumerate() {
        let d = diag[i.min(diag.len() - 1)];
        let peak = d.iter().map(|x| x.norm()).fold(0.0, f64::max);
        for (channel, x) in d.iter().enumerate() {
            let m = x.norm();
            if !m.is_finite() || m == 0.0 || m < 1e-12 * peak {
                return Err(CalibError::SingularDistortion { index: i, frequency_hz: grid.frequency(i), channel });
            }
        }
        out.push([v[0] / d[0], v[1] / d[1], v[2] / d[2], v[3] / d[3]]);
    }
    Ok(ScatteringMatrix2x2::from_vectors(grid, &out)?)
}

/// Largest condition number accepted by [`type3_calibrate`].
pub const MAX_CONDITION: f64 = 1e12;

/// Type-3 calibration: `vec(S) = C⁻¹ vec(M - B)` with a full 4×4 `C` per
/// frequency.
pub fn type3_calibrate(
    measured: &ScatteringMatrix2x2,
    background: &ScatteringMatrix2x2,
    c: &DistortionMatrix,
) -> Result<ScatteringMatrix2x2, CalibError> {
    c.check_len(measured.len())?;
    let diff = measured.minus(background)?;
    let grid = measured.grid;
    let flat = c.entries() == 1;
    let mut cached: Option<(Matrix4<Complex64>, nalgebra::LU<Complex64, nalgebra::U4, nalgebra::U4>)> = None;
    let mut out = Vec::with_capacity(diff.len());
    for (i, v) in diff.iter().enumerate() {
        if cached.is_none() || !flat {
            let m = c.matrix(i);
            let condition = condition_number(&m);
            if !(condition < MAX_CONDITION) {
                return Err(CalibError::IllConditioned { index: i, frequency_hz: grid.frequency(i), condition });
            }
            cached = Some((m, m.lu()));
        }
        let (_, lu) = cached.as_ref().expect("factorisation cached above");
        let x = lu
            .solve(&Vector4::from(*v))
            .ok_or(CalibError::IllConditioned { index: i, frequency_hz: grid.frequency(i), condition: f64::INFINITY })?;
        out.push([x[0], x[1], x[2], x[3]]);
    }
    Ok(ScatteringMatrix2x2::from_vectors(grid, &out)?)
}

/// 2-norm condition number from the singular values.
pub fn condition_number(m: &Matrix4<Complex64>) -> f64 {
    if m.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return f64::INFINITY;
    }
    let sv = m.singular_values();
    let max = sv.max();
    let min = sv.min();
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}
