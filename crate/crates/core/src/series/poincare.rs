//! Truncated Poincaré series from exact sphere counts.

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::subgroups::{count_by_length, ln_big, ActionTracker, FiniteAction, Product, SubgroupHandle};

/// Ratio below which two consecutive term ratios count as geometric decay.
pub const GEOMETRIC_RATIO: f64 = 1.0 - 1e-6;

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SeriesEstimate {
    pub exponent: f64,
    pub truncation_radius: usize,
    pub partial_sum: f64,
    #[serde(serialize_with = "crate::serde_big::biguint_vec")]
    pub counts: Vec<BigUint>,
    pub per_sphere_terms: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_bound: Option<f64>,
}

impl SeriesEstimate {
    /// Builds the estimate from counts `n_0..n_R`, summing in ascending order.
    pub fn from_counts(counts: Vec<BigUint>, s: f64) -> Self {
        let terms: Vec<f64> = counts
            .iter()
            .enumerate()
            .map(|(n, c)| (ln_big(c) - s * n as f64).exp())
            .collect();
        let partial_sum = terms.iter().sum();
        let tail_bound = geometric_tail(&terms);
        SeriesEstimate {
            exponent: s,
            truncation_radius: counts.len() - 1,
            partial_sum,
            counts,
            per_sphere_terms: terms,
            tail_bound,
        }
    }

    pub fn cumulative(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.per_sphere_terms
            .iter()
            .map(|t| {
                acc += t;
                acc
            })
            .collect()
    }

    /// Rows `n,count,term,cumulative`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,count,term,cumulative\n");
        for (n, ((c, t), cum)) in self.counts.iter().zip(&self.per_sphere_terms).zip(self.cumulative()).enumerate() {
            out.push_str(&format!("{n},{c},{},{}\n", fmt12(*t), fmt12(cum)));
        }
        out
    }
}

/// Twelve significant digits.
pub fn fmt12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{:.11e}", x);
    let v: f64 = s.parse().unwrap_or(x);
    format!("{v}")
}

/// When the last two term ratios are below [`GEOMETRIC_RATIO`], the tail is
/// bounded by the geometric series continuing the larger ratio.
fn geometric_tail(terms: &[f64]) -> Option<f64> {
    let n = terms.len();
    if n < 3 || terms[n - 1] <= 0.0 || terms[n - 2] <= 0.0 || terms[n - 3] <= 0.0 {
        return None;
    }
    let q1 = terms[n - 1] / terms[n - 2];
    let q2 = terms[n - 2] / terms[n - 3];
    (q1 < GEOMETRIC_RATIO && q2 < GEOMETRIC_RATIO).then(|| {
        let q = q1.max(q2);
        terms[n - 1] * q / (1.0 - q)
    })
}

/// `sum over g in H with |g| <= r of exp(-s |g|)`.
pub fn poincare_partial(h: &SubgroupHandle, s: f64, r: usize) -> Result<SeriesEstimate> {
    if !(s >= 0.0) {
        return invalid(format!("exponent must be nonnegative, got {s}"));
    }
    Ok(SeriesEstimate::from_counts(h.sphere_counts(r), s))
}

/// Counts of `g in H` with `|g| = n` and `g . z in targets`, for `n = 0..=r`.
///
/// Inversion preserves `H` and word length, so this equals the number of `g`
/// with `g^-1 . z in targets`, which an automaton reading `g` can track.
pub fn orbit_condition_counts(
    h: &SubgroupHandle,
    action: &FiniteAction,
    z: usize,
    targets: &[usize],
    r: usize,
) -> Result<Vec<BigUint>> {
    if action.rank() != h.rank() {
        return invalid(format!("action has rank {}, subgroup has rank {}", action.rank(), h.rank()));
    }
    if z >= action.size() {
        return invalid(format!("point {z} outside an action on {} points", action.size()));
    }
    if let Some(t) = targets.iter().find(|&&t| t >= action.size()) {
        return invalid(format!("target {t} outside an action on {} points", action.size()));
    }
    let membership = h.automaton();
    let tracker = ActionTracker::new(action, z, targets);
    Ok(count_by_length(&Product { left: &membership, right: &tracker }, r))
}

/// The series restricted to `{g in H : g . z in targets}`.
pub fn partial_poincare_over_action(
    h: &SubgroupHandle,
    action: &FiniteAction,
    z: usize,
    targets: &[usize],
    s: f64,
    r: usize,
) -> Result<SeriesEstimate> {
    if !(s >= 0.0) {
        return invalid(format!("exponent must be nonnegative, got {s}"));
    }
    Ok(SeriesEstimate::from_counts(orbit_condition_counts(h, action, z, targets, r)?, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{TreeModel, Word};

    #[test]
    fn full_group_at_critical_exponent() {
        let e = poincare_partial(&SubgroupHandle::full(2), 3f64.ln(), 10).unwrap();
        assert!((e.partial_sum - (1.0 + 40.0 / 3.0)).abs() < 1e-12);
        assert!(e.tail_bound.is_none());
    }

    #[test]
    fn full_group_converges_to_five() {
        let e = poincare_partial(&SubgroupHandle::full(2), 4f64.ln(), 20).unwrap();
        let tail = e.tail_bound.unwrap();
        assert!(e.partial_sum <= 5.0 && e.partial_sum + tail >= 5.0 - 1e-12);
        assert!((e.partial_sum + tail - 5.0).abs() < 1e-3);
    }

    #[test]
    fn cyclic_closed_form() {
        let h = SubgroupHandle::cyclic(2, &Word::parse("a").unwrap()).unwrap();
        let e = poincare_partial(&h, 1.0, 3).unwrap();
        let expected = 1.0 + 2.0 * ((-1f64).exp() + (-2f64).exp() + (-3f64).exp());
        assert!((e.partial_sum - expected).abs() < 1e-12);
    }

    #[test]
    fn orbit_restriction_matches_brute_force() {
        let act = FiniteAction::new(vec![vec![1, 2, 0], vec![1, 0, 2]]).unwrap();
        let f2 = SubgroupHandle::full(2);
        let s = 3f64.ln();
        let restricted = partial_poincare_over_action(&f2, &act, 0, &[0], s, 6).unwrap();
        let brute: f64 = TreeModel::new(2)
            .unwrap()
            .ball(6)
            .iter()
            .filter(|g| act.act(g, 0) == 0)
            .map(|g| (-s * g.len() as f64).exp())
            .sum();
        assert!((restricted.partial_sum - brute).abs() < 1e-9);
        let all = partial_poincare_over_action(&f2, &act, 0, &[0, 1, 2], s, 6).unwrap();
        assert_eq!(all.counts, poincare_partial(&f2, s, 6).unwrap().counts);
        let none = partial_poincare_over_action(&f2, &act, 0, &[], s, 6).unwrap();
        assert_eq!(none.partial_sum, 0.0);
        assert!(partial_poincare_over_action(&f2, &act, 7, &[], s, 6).is_err());
    }

    #[test]
    fn csv_has_header_and_rows() {
        let e = poincare_partial(&SubgroupHandle::full(2), 1.0, 2).unwrap();
        let csv = e.to_csv();
        assert!(csv.starts_with("n,count,term,cumulative\n0,1,1,1\n1,4,"));
        assert_eq!(csv.lines().count(), 4);
    }
}
