//! Counts of returns to a set of points along annuli of the free group.

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::series::orbit_condition_counts;
use crate::subgroups::{annulus_from_spheres, ln_big, FiniteAction, SubgroupHandle};

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RecurrenceReport {
    pub point: usize,
    pub targets: Vec<usize>,
    pub width: usize,
    pub exponent: f64,
    /// `#{g : r <= |g| <= r + k, g . x in U}` for `r = 0..=rmax`.
    #[serde(serialize_with = "crate::serde_big::biguint_vec")]
    pub counts: Vec<BigUint>,
    /// The same counts scaled by `exp(-exponent r)`.
    pub normalized: Vec<f64>,
    pub infimum: f64,
    pub infimum_radius: usize,
    /// Uniform measure of the target set.
    pub target_measure: f64,
    /// `min(infimum, target_measure)`.
    pub kappa: f64,
    /// `target_measure - (1 - kappa)`; positive when the target set is large enough for this kappa.
    pub margin: f64,
}

pub fn recurrence_counts(
    action: &FiniteAction,
    x: usize,
    targets: &[usize],
    width: usize,
    rmax: usize,
    exponent: f64,
) -> Result<RecurrenceReport> {
    if !(exponent > 0.0) {
        return invalid(format!("exponent must be positive, got {exponent}"));
    }
    let mut targets: Vec<usize> = targets.to_vec();
    targets.sort_unstable();
    targets.dedup();
    let full = SubgroupHandle::full(action.rank());
    let spheres = orbit_condition_counts(&full, action, x, &targets, rmax + width)?;
    let counts: Vec<BigUint> = (0..=rmax).map(|r| annulus_from_spheres(&spheres, r, r + width)).collect();
    let normalized: Vec<f64> = counts
        .iter()
        .enumerate()
        .map(|(r, c)| if c == &BigUint::ZERO { 0.0 } else { (ln_big(c) - exponent * r as f64).exp() })
        .collect();
    let (infimum_radius, infimum) = normalized
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (r, v)| if v < best.1 { (r, v) } else { best });
    let target_measure = targets.len() as f64 / action.size() as f64;
    let kappa = infimum.min(target_measure);
    Ok(RecurrenceReport {
        point: x,
        targets,
        width,
        exponent,
        counts,
        normalized,
        infimum,
        infimum_radius,
        target_measure,
        kappa,
        margin: target_measure - (1.0 - kappa),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn point_action_gives_annuli() {
        let rep = recurrence_counts(&FiniteAction::trivial(2), 0, &[0], 1, 8, 3f64.ln()).unwrap();
        let full = SubgroupHandle::full(2).sphere_counts(9);
        for r in 0..=8 {
            assert_eq!(rep.counts[r], annulus_from_spheres(&full, r, r + 1));
        }
        assert!(rep.infimum > 0.0);
    }

    #[test]
    fn three_cosets_and_empty_target() {
        let ln3 = 3f64.ln();
        let rep = recurrence_counts(&corpus::three_cosets(), 0, &[0, 1], 1, 12, ln3).unwrap();
        assert!(rep.infimum > 0.0);
        let none = recurrence_counts(&corpus::three_cosets(), 0, &[], 1, 12, ln3).unwrap();
        assert!(none.counts.iter().all(|c| c == &BigUint::ZERO));
        assert_eq!(none.infimum, 0.0);
    }
}
