use std::f64::consts::PI;

use num_complex::Complex64;

use super::impulse::signed_bin;
use super::{fft, DspError};
use crate::model::{ComplexSweep, FrequencyGrid};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateEdge {
    Rectangular,
    /// Raised-cosine edges; `taper_fraction` of the full gate width
    /// (`2 · half_width`) is spent tapering, half on each side.
    Tukey { taper_fraction: f64 },
}

impl GateEdge {
    /// `rect`, `tukey` (10 % taper) or `tukey:<fraction>`.
    pub fn parse(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "rect" | "rectangular" => Some(Self::Rectangular),
            "tukey" => Some(Self::Tukey { taper_fraction: 0.1 }),
            other => other
                .strip_prefix("tukey:")
                .and_then(|f| f.parse().ok())
                .filter(|f: &f64| (0.0..=1.0).contains(f))
                .map(|taper_fraction| Self::Tukey { taper_fraction }),
        }
    }
}

/// Delay-domain gate on the path-length axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateSpec {
    pub center_m: f64,
    pub half_width_m: f64,
    pub edge: GateEdge,
}

impl Default for GateSpec {
    /// ±2 m around the origin with 10 % Tukey edges.
    fn default() -> Self {
        Self { center_m: 0.0, half_width_m: 2.0, edge: GateEdge::Tukey { taper_fraction: 0.1 } }
    }
}

impl GateSpec {
    pub fn rectangular(center_m: f64, half_width_m: f64) -> Self {
        Self { center_m, half_width_m, edge: GateEdge::Rectangular }
    }

    /// Rectangular gate covering the whole unambiguous range.
    pub fn all_pass(grid: &FrequencyGrid) -> Self {
        Self::rectangular(0.0, grid.unambiguous_path() / 2.0)
    }

    pub fn centered_at(self, center_m: f64) -> Self {
        Self { center_m, ..self }
    }

    pub fn validate(&self, grid: &FrequencyGrid) -> Result<(), DspError> {
        if !(self.half_width_m.is_finite() && self.half_width_m > 0.0) || !self.center_m.is_finite() {
            return Err(DspError::InvalidGate(format!(
                "half width must be positive and finite (got {}), center finite (got {})",
                self.half_width_m, self.center_m
            )));
        }
        if let GateEdge::Tukey { taper_fraction } = self.edge {
            if !(0.0..=1.0).contains(&taper_fraction) {
                return Err(DspError::InvalidGate(format!("taper fraction {taper_fraction} outside [0, 1]")));
            }
        }
        let span = grid.unambiguous_path();
        let slack = 1e-12 * span;
        if 2.0 * self.half_width_m > span + slack {
            return Err(DspError::GateOutOfRange {
                unambiguous_m: span,
                detail: format!("gate width {} m", 2.0 * self.half_width_m),
            });
        }
        if self.center_m.abs() > span / 2.0 + slack {
            return Err(DspError::GateOutOfRange { unambiguous_m: span, detail: format!("gate center {} m", self.center_m) });
        }
        Ok(())
    }

    /// Gate weight at a path offset `d` from the centre.
    pub fn weight_at_offset(&self, d: f64) -> f64 {
        let a = d.abs();
        let h = self.half_width_m;
        let tol = 1e-9 * h;
        match self.edge {
            GateEdge::Rectangular => {
                if a <= h + tol {
                    1.0
                } else {
                    0.0
                }
            }
            GateEdge::Tukey { taper_fraction } => {
                let taper = taper_fraction * h;
                if a <= h - taper + tol {
                    1.0
                } else if a >= h {
                    0.0
                } else {
                    0.5 * (1.0 + (PI * (a - (h - taper)) / taper).cos())
                }
            }
        }
    }

    /// Weight for every impulse-response bin on `grid`, with circular
    /// wrap of the path offset.
    pub fn weights(&self, grid: &FrequencyGrid) -> Vec<f64> {
        let n = grid.len();
        let bin = grid.range_bin();
        let span = n as f64 * bin;
        (0..n)
            .map(|k| {
                let path = signed_bin(k, n) as f64 * bin;
                let d = (path - self.center_m + span / 2.0).rem_euclid(span) - span / 2.0;
                self.weight_at_offset(d)
            })
            .collect()
    }
}

/// Gating by transforming to the delay domain, weighting the taps and
/// transforming back.
pub fn time_gate_td(sweep: &ComplexSweep, gate: &GateSpec) -> Result<ComplexSweep, DspError> {
    let grid = *sweep.grid();
    gate.validate(&grid)?;
    let w = gate.weights(&grid);
    let mut taps = sweep.values().to_vec();
    fft::inverse(&mut taps);
    taps.iter_mut().zip(&w).for_each(|(t, w)| *t *= w);
    fft::forward(&mut taps);
    Ok(ComplexSweep::new(grid, taps, sweep.role())?)
}

/// Frequency-domain kernel of the gate, `K_q = Σ_k w_k e^{-j2πqk/N}`,
/// summed over the gate's non-zero bins.
pub fn gate_kernel(grid: &FrequencyGrid, gate: &GateSpec) -> Vec<Complex64> {
    let n = grid.len();
    let support: Vec<(usize, f64)> = gate.weights(grid).into_iter().enumerate().filter(|&(_, w)| w != 0.0).collect();
    (0..n)
        .map(|q| {
            support
                .iter()
                .map(|&(k, w)| {
                    // (q k) mod n keeps the phase argument small
                    let m = (q * k) % n;
                    Complex64::from_polar(w, -2.0 * PI * m as f64 / n as f64)
                })
                .sum()
        })
        .collect()
}

/// Gating without leaving the frequency domain: circular convolution of
/// the spectrum with the gate kernel, `Y_n = (1/N) Σ_m X_m K_{n-m}`.
pub fn time_gate_fd(sweep: &ComplexSweep, gate: &GateSpec) -> Result<ComplexSweep, DspError> {
    let grid = *sweep.grid();
    gate.validate(&grid)?;
    let kernel = gate_kernel(&grid, gate);
    let n = grid.len();
    let x = sweep.values();
    let scale = 1.0 / n as f64;
    let out = (0..n)
        .map(|i| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (m, xm) in x.iter().enumerate() {
                acc += xm * kernel[(i + n - m) % n];
            }
            acc * scale
        })
        .collect();
    Ok(ComplexSweep::new(grid, out, sweep.role())?)
}
