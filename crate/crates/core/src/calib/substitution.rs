use super::{CalibError, DivisionPolicy};
use crate::model::{ComplexSweep, Reflectivity};

/// Type-1 substitution calibration:
/// `σ = |S21_target|² / |S21_ref|² · σ_ref`, per frequency.
pub fn type1_calibrate(
    target: &ComplexSweep,
    reference: &ComplexSweep,
    sigma_ref: &Reflectivity,
) -> Result<Reflectivity, CalibError> {
    type1_calibrate_with(target, reference, sigma_ref, &DivisionPolicy::default())
}

pub fn type1_calibrate_with(
    target: &ComplexSweep,
    reference: &ComplexSweep,
    sigma_ref: &Reflectivity,
    policy: &DivisionPolicy,
) -> Result<Reflectivity, CalibError> {
    target.ensure_same_grid(reference)?;
    sigma_ref.check_len(target.len())?;
    let grid = *target.grid();
    let ratio = policy.divide(target.values(), reference.values(), |i| grid.frequency(i))?;
    let sigma = ratio.iter().enumerate().map(|(i, r)| r.norm_sqr() * sigma_ref.at(i)).collect();
    Ok(Reflectivity::per_frequency(sigma)?)
}
