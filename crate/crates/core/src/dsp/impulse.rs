use num_complex::Complex64;

use super::{fft, Window};
use crate::model::{ComplexSweep, FrequencyGrid, ModelError, SweepRole, SPEED_OF_LIGHT};

/// Power floor substituted for empty bins in power delay profiles.
pub const PDP_FLOOR_DB: f64 = -400.0;

/// Complex impulse response of a sweep, one tap per frequency point.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpulseResponse {
    grid: FrequencyGrid,
    taps: Vec<Complex64>,
    window: Window,
}

impl ImpulseResponse {
    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn taps(&self) -> &[Complex64] {
        &self.taps
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    /// Two-sided bin index: `k` for the first half, `k - N` above it.
    pub fn signed_bin(&self, k: usize) -> i64 {
        signed_bin(k, self.len())
    }

    pub fn delay(&self, k: usize) -> f64 {
        self.signed_bin(k) as f64 / (self.len() as f64 * self.grid.step())
    }

    pub fn path_length(&self, k: usize) -> f64 {
        self.signed_bin(k) as f64 * self.grid.range_bin()
    }

    /// Bin whose path length is closest to `path` (wrapped).
    pub fn bin_for_path(&self, path: f64) -> usize {
        let n = self.len() as i64;
        ((path / self.grid.range_bin()).round() as i64).rem_euclid(n) as usize
    }

    /// Bins with path length in `[lo, hi]`, ordered by path length.
    pub fn bins_in_path_interval(&self, lo: f64, hi: f64) -> Vec<usize> {
        let bin = self.grid.range_bin();
        let first = (lo / bin - 1e-9).ceil() as i64;
        let last = (hi / bin + 1e-9).floor() as i64;
        let n = self.len() as i64;
        let half = (n - 1) / 2;
        (first.max(-(n / 2))..=last.min(half))
            .map(|b| b.rem_euclid(n) as usize)
            .collect()
    }

    /// Forward transform back to the frequency domain. Exact inverse of
    /// [`impulse_response`] for the rectangular window.
    pub fn spectrum(&self, role: SweepRole) -> Result<ComplexSweep, ModelError> {
        spectrum_from_taps(self.grid, self.taps.clone(), role)
    }

    /// Tap power summed over `±half_width` bins around `bin`, divided by the
    /// window's noise bandwidth; equals `|a|²` for a flat response `a`.
    pub fn band_power(&self, bin: usize, half_width: usize) -> f64 {
        let n = self.len() as i64;
        let sum: f64 = (-(half_width as i64)..=half_width as i64)
            .map(|d| self.taps[(bin as i64 + d).rem_euclid(n) as usize].norm_sqr())
            .sum();
        sum / self.window.enbw(self.len())
    }

    /// Index of the strongest tap among `bins`.
    pub fn peak_in(&self, bins: &[usize]) -> Option<usize> {
        bins.iter().copied().max_by(|&a, &b| self.taps[a].norm_sqr().total_cmp(&self.taps[b].norm_sqr()))
    }

    pub fn peak(&self) -> usize {
        let all: Vec<usize> = (0..self.len()).collect();
        self.peak_in(&all).unwrap_or(0)
    }
}

pub(crate) fn signed_bin(k: usize, n: usize) -> i64 {
    if k <= (n - 1) / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// Inverse DFT of the windowed spectrum, `1/N` normalised.
pub fn impulse_response(sweep: &ComplexSweep, window: Window) -> ImpulseResponse {
    let w = window.coefficients(sweep.len());
    let mut taps: Vec<Complex64> = sweep.values().iter().zip(&w).map(|(v, w)| v * w).collect();
    fft::inverse(&mut taps);
    ImpulseResponse { grid: *sweep.grid(), taps, window }
}

pub fn spectrum_from_taps(grid: FrequencyGrid, mut taps: Vec<Complex64>, role: SweepRole) -> Result<ComplexSweep, ModelError> {
    if taps.len() != grid.len() {
        return Err(ModelError::LengthMismatch { expected: grid.len(), got: taps.len() });
    }
    fft::forward(&mut taps);
    ComplexSweep::new(grid, taps, role)
}

/// Power delay profile `10 log10 |tap|²`, floored at [`PDP_FLOOR_DB`].
pub fn pdp(ir: &ImpulseResponse) -> Vec<f64> {
    ir.taps
        .iter()
        .map(|t| {
            let p = t.norm_sqr();
            if p > 0.0 {
                (10.0 * p.log10()).max(PDP_FLOOR_DB)
            } else {
                PDP_FLOOR_DB
            }
        })
        .collect()
}

/// Spectrum of a unit echo at excess path `path_m`, handy for tests and
/// synthetic inputs.
/// Spectrum of a single echo at excess path `path_m` with complex amplitude
/// `amplitude`, evaluated on the grid.
pub fn echo_spectrum(grid: &FrequencyGrid, path_m: f64, amplitude: Complex64) -> Vec<Complex64> {
    grid.frequencies()
        .map(|f| amplitude * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * f * path_m / SPEED_OF_LIGHT))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn sweep(grid: FrequencyGrid, v: Vec<Complex64>) -> ComplexSweep {
        ComplexSweep::new(grid, v, SweepRole::Target).unwrap()
    }

    #[test]
    fn flat_spectrum_is_unit_tap() {
        let g = FrequencyGrid::default();
        let ir = impulse_response(&sweep(g, vec![Complex64::new(1.0, 0.0); g.len()]), Window::Rectangular);
        assert!((ir.taps()[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(ir.taps()[1..].iter().all(|t| t.norm() < 1e-12));
        assert!(pdp(&ir)[0].abs() < 1e-10);
    }

    #[test]
    fn shift_theorem() {
        let g = FrequencyGrid::default();
        for m in [1usize, 17, 500, 501, 990] {
            let tau = m as f64 / (g.len() as f64 * g.step());
            let v = g.frequencies().map(|f| Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * f * tau)).collect();
            let ir = impulse_response(&sweep(g, v), Window::Rectangular);
            assert_eq!(ir.peak(), m);
            assert!((ir.taps()[m].norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn parseval() {
        let g = FrequencyGrid::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let v: Vec<Complex64> = (0..g.len()).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let spec_energy: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>() / g.len() as f64;
        let ir = impulse_response(&sweep(g, v), Window::Rectangular);
        let tap_energy: f64 = ir.taps().iter().map(|x| x.norm_sqr()).sum();
        assert!((tap_energy / spec_energy - 1.0).abs() < 1e-12);
    }

    #[test]
    fn round_trip_identity() {
        let g = FrequencyGrid::new(76e9, 81e9, 257).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        let v: Vec<Complex64> = (0..g.len()).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let s = sweep(g, v);
        let back = impulse_response(&s, Window::Rectangular).spectrum(SweepRole::Target).unwrap();
        for (a, b) in back.values().iter().zip(s.values()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn pdp_floor_for_empty_bins() {
        let g = FrequencyGrid::new(1.0, 2.0, 4).unwrap();
        let ir = impulse_response(&ComplexSweep::zeros(g, SweepRole::Target), Window::Hann);
        assert!(pdp(&ir).iter().all(|&p| p == PDP_FLOOR_DB));
    }

    #[test]
    fn signed_axis_and_intervals() {
        let g = FrequencyGrid::default();
        let ir = impulse_response(&ComplexSweep::zeros(g, SweepRole::Target), Window::Rectangular);
        assert_eq!(ir.signed_bin(500), 500);
        assert_eq!(ir.signed_bin(501), -500);
        assert_eq!(ir.signed_bin(1000), -1);
        assert!((ir.path_length(1000) + g.range_bin()).abs() < 1e-15);
        let bins = ir.bins_in_path_interval(-2.0, 2.0);
        assert_eq!(bins.len(), 67);
        assert_eq!(bins[33], 0);
        assert_eq!(bins[0], 1001 - 33);
        assert_eq!(ir.bin_for_path(-0.06), 1000);
    }

    #[test]
    fn hann_band_power_recovers_flat_level() {
        let g = FrequencyGrid::default();
        let a = Complex64::new(0.2, 0.1);
        let v = echo_spectrum(&g, 0.3 + 0.37 * g.range_bin(), a);
        let ir = impulse_response(&sweep(g, v), Window::Hann);
        let p = ir.band_power(ir.peak(), 3);
        assert!((10.0 * (p / a.norm_sqr()).log10()).abs() < 0.01);
    }

    proptest! {
        #[test]
        fn echo_lands_on_expected_bin(path in -20.0f64..20.0) {
            let g = FrequencyGrid::default();
            let ir = impulse_response(&sweep(g, echo_spectrum(&g, path, Complex64::new(1.0, 0.0))), Window::Hann);
            let expected = (path / g.range_bin()).round() as i64;
            let got = ir.signed_bin(ir.peak());
            prop_assert!((got - expected).abs() <= 1, "path {path}: bin {got} vs {expected}");
        }
    }
}
