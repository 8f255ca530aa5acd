use num_complex::Complex64;

use super::DspError;

/// Bins on each side of the peak excluded from the sidelobe search.
pub const DEFAULT_GUARD_BINS: usize = 3;

/// Peak-to-maximum-sidelobe ratio in dB within `region`.
///
/// The peak is the strongest bin of `region`; bins within `guard_bins`
/// (circularly) of it are ignored when looking for the strongest sidelobe.
pub fn dynamic_range(pdp_db: &[f64], guard_bins: usize, region: &[usize]) -> Result<f64, DspError> {
    let n = pdp_db.len();
    let peak = region
        .iter()
        .copied()
        .filter(|&k| k < n)
        .max_by(|&a, &b| pdp_db[a].total_cmp(&pdp_db[b]))
        .ok_or(DspError::EmptyRegion)?;
    let sidelobe = region
        .iter()
        .copied()
        .filter(|&k| k < n)
        .filter(|&k| {
            let d = k.abs_diff(peak);
            d.min(n - d) > guard_bins
        })
        .map(|k| pdp_db[k])
        .max_by(f64::total_cmp)
        .ok_or(DspError::EmptyRegion)?;
    Ok(pdp_db[peak] - sidelobe)
}

/// Energy of `gated − expected` relative to the energy of `input`.
///
/// With `expected` equal to the in-gate part of `input` this measures what a
/// gate lets through from outside (leakage) plus what it removes from
/// inside (truncation).
pub fn gating_error(input: &[Complex64], expected: &[Complex64], gated: &[Complex64]) -> f64 {
    let e_in: f64 = input.iter().map(|v| v.norm_sqr()).sum();
    let e_err: f64 = gated.iter().zip(expected).map(|(g, x)| (g - x).norm_sqr()).sum();
    e_err / e_in
}
