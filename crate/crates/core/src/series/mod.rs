//! Poincaré series, critical exponents and the bottom of the spectrum.

pub mod conjugation;
pub mod exponent;
pub mod plane;
pub mod poincare;

pub use conjugation::{
    conjugating_elements, conjugation_series, conjugators_within, half_exponent_check, shortest_element_bound,
    shortest_element_constant, ConjugationSeries, HalfExponentReport, ShortestElementConstant, ShortestElementReport,
};
pub use exponent::{
    critical_exponent_estimate, diagnose, divergence_diagnostic, exponent_from_counts, DivergenceReport, ExponentEstimate,
    GrowthClass,
};
pub use plane::{plane_orbit_series, PlaneOrbitSeries};
pub use poincare::{fmt12, orbit_condition_counts, partial_poincare_over_action, poincare_partial, SeriesEstimate};

use crate::error::{invalid, Result};

/// Bottom of the spectrum from the critical exponent `delta` and the boundary
/// dimension `d`: `d^2 / 4` up to `d / 2`, then `delta (d - delta)`.
pub fn lambda0_from_delta(delta: f64, d: f64) -> Result<f64> {
    if !(d >= 0.0) || !(0.0..=d).contains(&delta) {
        return invalid(format!("need 0 <= delta <= d, got delta = {delta}, d = {d}"));
    }
    Ok(if delta <= d / 2.0 { d * d / 4.0 } else { delta * (d - delta) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda0_examples() {
        assert_eq!(lambda0_from_delta(2.0, 2.0).unwrap(), 0.0);
        assert_eq!(lambda0_from_delta(0.5, 2.0).unwrap(), 1.0);
        assert_eq!(lambda0_from_delta(1.5, 2.0).unwrap(), 0.75);
        assert!(lambda0_from_delta(2.5, 2.0).is_err());
        assert!(lambda0_from_delta(-0.1, 2.0).is_err());
        let eps = 1e-7;
        let gap = (lambda0_from_delta(1.0 + eps, 2.0).unwrap() - lambda0_from_delta(1.0 - eps, 2.0).unwrap()).abs();
        assert!(gap <= 2.0 * eps * 2.0);
    }
}
