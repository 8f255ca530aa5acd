//! Impulse responses, power delay profiles and time gating.
//!
//! Conventions: the impulse response is the inverse DFT of the (windowed)
//! spectrum with `1/N` normalisation, so a flat unit spectrum gives a unit
//! tap at bin 0. Bin `k` sits at delay `k / (N Δf)`; bins above `N/2` are
//! negative delays. Path-length axes are `c · delay` (total excess path,
//! not halved).

mod fft;
mod gate;
mod impulse;
mod metrics;
mod window;

pub use gate::{time_gate_fd, time_gate_td, GateEdge, GateSpec};
pub use impulse::{echo_spectrum, impulse_response, pdp, spectrum_from_taps, ImpulseResponse, PDP_FLOOR_DB};
pub use metrics::{dynamic_range, gating_error, DEFAULT_GUARD_BINS};
pub use window::Window;

use crate::model::ModelError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DspError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("invalid gate: {0}")]
    InvalidGate(String),
    #[error("gate exceeds the unambiguous range of {unambiguous_m:.3} m: {detail}")]
    GateOutOfRange { unambiguous_m: f64, detail: String },
    #[error("dynamic-range region is empty after excluding the guard bins")]
    EmptyRegion,
}
