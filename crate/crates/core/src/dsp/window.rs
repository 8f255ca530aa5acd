use std::f64::consts::PI;

/// Spectral window applied across the frequency sweep before the inverse
/// transform. Coefficients are periodic (DFT-even) and scaled to unit mean,
/// so a frequency-flat response keeps its amplitude at the peak tap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Window {
    Rectangular,
    Hann,
    Hamming,
    Blackman,
    /// Cosine-tapered flat top; the parameter is the tapered fraction of the
    /// sweep in `[0, 1]`.
    Tukey(f64),
}

impl Window {
    pub fn coefficients(&self, n: usize) -> Vec<f64> {
        let raw: Vec<f64> = (0..n).map(|i| self.raw(i, n)).collect();
        let mean = raw.iter().sum::<f64>() / n as f64;
        raw.into_iter().map(|w| w / mean).collect()
    }

    fn raw(&self, i: usize, n: usize) -> f64 {
        let x = i as f64 / n as f64;
        match *self {
            Self::Rectangular => 1.0,
            Self::Hann => 0.5 - 0.5 * (2.0 * PI * x).cos(),
            Self::Hamming => 0.54 - 0.46 * (2.0 * PI * x).cos(),
            Self::Blackman => 0.42 - 0.5 * (2.0 * PI * x).cos() + 0.08 * (4.0 * PI * x).cos(),
            Self::Tukey(alpha) => {
                let alpha = alpha.clamp(0.0, 1.0);
                if alpha == 0.0 {
                    return 1.0;
                }
                let edge = alpha / 2.0;
                if x < edge {
                    0.5 * (1.0 - (PI * x / edge).cos())
                } else if x > 1.0 - edge {
                    0.5 * (1.0 - (PI * (1.0 - x) / edge).cos())
                } else {
                    1.0
                }
            }
        }
    }

    /// Equivalent noise bandwidth in bins, `N Σw² / (Σw)²`. Dividing the
    /// summed tap power around a peak by this recovers the power of a
    /// frequency-flat response.
    pub fn enbw(&self, n: usize) -> f64 {
        let w = self.coefficients(n);
        let s1: f64 = w.iter().sum();
        let s2: f64 = w.iter().map(|v| v * v).sum();
        n as f64 * s2 / (s1 * s1)
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "rect" | "rectangular" | "none" => Some(Self::Rectangular),
            "hann" | "hanning" => Some(Self::Hann),
            "hamming" => Some(Self::Hamming),
            "blackman" => Some(Self::Blackman),
            other => other.strip_prefix("tukey").and_then(|rest| {
                let rest = rest.trim_start_matches([':', '(']).trim_end_matches(')');
                if rest.is_empty() {
                    Some(Self::Tukey(0.5))
                } else {
                    rest.parse().ok().map(Self::Tukey)
                }
            }),
        }
    }
}
