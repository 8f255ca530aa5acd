use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    })
}

/// `x_k = (1/N) Σ_n X_n e^{+j2πnk/N}`
pub(crate) fn inverse(data: &mut [Complex64]) {
    let n = data.len();
    plan(n, true).process(data);
    let s = 1.0 / n as f64;
    data.iter_mut().for_each(|v| *v *= s);
}

/// `X_n = Σ_k x_k e^{-j2πnk/N}`
pub(crate) fn forward(data: &mut [Complex64]) {
    plan(data.len(), false).process(data);
}
