use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Additive complex circular Gaussian receiver noise.
///
/// `floor_db` is the expected per-point power `E|n|²` in dB; `None` turns
/// noise off. Each sweep draws from its own ChaCha stream so that sweeps
/// can be generated in any order or in parallel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub floor_db: Option<f64>,
    pub seed: u64,
    pub stream: u64,
}

impl NoiseSpec {
    pub fn off() -> Self {
        Self { floor_db: None, seed: 0, stream: 0 }
    }

    pub fn new(floor_db: f64, seed: u64) -> Self {
        Self { floor_db: Some(floor_db), seed, stream: 0 }
    }

    pub fn with_stream(self, stream: u64) -> Self {
        Self { stream, ..self }
    }

    pub fn is_off(&self) -> bool {
        self.floor_db.is_none()
    }

    pub fn samples(&self, n: usize) -> Vec<Complex64> {
        let Some(db) = self.floor_db else {
            return vec![Complex64::new(0.0, 0.0); n];
        };
        let sd = (10f64.powf(db / 10.0) / 2.0).sqrt();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        (0..n)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(sd * re, sd * im)
            })
            .collect()
    }
}
