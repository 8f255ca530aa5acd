use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

/// Gaussian-beam horn model.
///
/// Power gain falls off as `exp(-4 ln2 (a/bw)²)` independently in the
/// horizontal (H-plane) and vertical (E-plane) directions, so the gain is
/// 3 dB down at half the beamwidth. `feed_delay_s` adds a dispersionless
/// phase response; `gain_slope_db_per_ghz` tilts the boresight gain around
/// `reference_hz`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntennaPattern {
    pub boresight_gain_dbi: f64,
    pub beamwidth_e_deg: f64,
    pub beamwidth_h_deg: f64,
    pub gain_slope_db_per_ghz: f64,
    pub reference_hz: f64,
    pub feed_delay_s: f64,
}

impl Default for AntennaPattern {
    /// 25 dBi horn with 9° E-plane and 10° H-plane beamwidths.
    fn default() -> Self {
        Self {
            boresight_gain_dbi: 25.0,
            beamwidth_e_deg: 9.0,
            beamwidth_h_deg: 10.0,
            gain_slope_db_per_ghz: 0.0,
            reference_hz: 78.5e9,
            feed_delay_s: 0.0,
        }
    }
}

impl AntennaPattern {
    pub fn isotropic_gain(gain_dbi: f64) -> Self {
        Self { boresight_gain_dbi: gain_dbi, ..Self::default() }
    }

    /// Linear power gain at frequency `f` and off-boresight angles (radians).
    pub fn gain(&self, f: f64, horizontal: f64, vertical: f64) -> f64 {
        let g_db = self.boresight_gain_dbi + self.gain_slope_db_per_ghz * (f - self.reference_hz) / 1e9;
        let bw_h = self.beamwidth_h_deg.to_radians();
        let bw_v = self.beamwidth_e_deg.to_radians();
        let rolloff = -4.0 * LN_2 * ((horizontal / bw_h).powi(2) + (vertical / bw_v).powi(2));
        10f64.powf(g_db / 10.0) * rolloff.exp()
    }

    pub fn boresight_gain(&self, f: f64) -> f64 {
        self.gain(f, 0.0, 0.0)
    }

    /// Complex field response `sqrt(G) e^{-j2πf τ_feed}`.
    pub fn response(&self, f: f64, horizontal: f64, vertical: f64) -> Complex64 {
        Complex64::from_polar(self.gain(f, horizontal, vertical).sqrt(), -2.0 * PI * f * self.feed_delay_s)
    }
}
