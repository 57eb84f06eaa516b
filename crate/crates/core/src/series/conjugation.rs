//! Series over the elements conjugating a hyperbolic element into a finite set.
//!
//! For `h = u c u^-1` and `v = w d w^-1` with `c`, `d` cyclically reduced, the
//! solutions of `g h g^-1 = v` are empty unless `d` is a rotation of `c`, and
//! otherwise form the coset `w t0 <r> u^-1`, where `t0 c t0^-1 = d` and `r` is
//! the primitive root of `c`. Enumerating that coset replaces a scan of the ball.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use serde::Serialize;

use super::poincare::SeriesEstimate;
use crate::error::{invalid, Error, Result};
use crate::space::{tree_axis, Word};
use crate::subgroups::SubgroupHandle;

/// One `t` with `t c t^-1 = d`, for cyclically reduced `c` and `d`.
fn rotation_conjugator(c: &Word, d: &Word) -> Option<Word> {
    if c.len() != d.len() {
        return None;
    }
    // c = x y and d = y x give x^-1 (x y) x = y x.
    (0..c.len().max(1)).find(|&j| &c.rotate_left(j) == d).map(|j| c.prefix(j).inverse())
}

/// All `g` with `|g| <= r` and `g h g^-1 = v`, in the whole free group.
pub fn conjugators_within(h: &Word, v: &Word, r: usize) -> Vec<Word> {
    if h.is_empty() || v.is_empty() {
        return Vec::new();
    }
    let (u, c) = h.cyclic_decomposition();
    let (w, d) = v.cyclic_decomposition();
    let Some(t0) = rotation_conjugator(&c, &d) else { return Vec::new() };
    let (root, _) = c.primitive_root();
    let base = w.mul(&t0);
    // |base root^n u^-1| >= |n| |root| - |base| - |u|.
    let reach = ((r + base.len() + u.len()) / root.len() + 1) as i64;
    let mut out: Vec<Word> = (-reach..=reach)
        .map(|n| base.mul(&root.pow(n)).mul(&u.inverse()))
        .filter(|g| g.len() <= r)
        .collect();
    out.sort_by(|a, b| a.shortlex_cmp(b));
    out.dedup();
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjugatingElement {
    pub element: Word,
    pub conjugate: Word,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConjugationSeries {
    pub elements: Vec<ConjugatingElement>,
    pub estimate: SeriesEstimate,
}

fn check_inputs(gamma: &SubgroupHandle, h: &Word, targets: &[Word], s: f64) -> Result<()> {
    if h.is_empty() {
        return invalid("the conjugated element must be nontrivial");
    }
    if !(s >= 0.0) {
        return invalid(format!("exponent must be nonnegative, got {s}"));
    }
    let k = gamma.rank();
    if let Some(x) = std::iter::once(h).chain(targets).find(|x| !x.fits_rank(k)) {
        return invalid(format!("{x} does not fit rank {k}"));
    }
    Ok(())
}

/// Elements `g` of `gamma` with `|g| <= r` and `g h g^-1` in `targets`, shortlex sorted.
pub fn conjugating_elements(gamma: &SubgroupHandle, h: &Word, targets: &[Word], r: usize) -> Vec<ConjugatingElement> {
    let targets: BTreeSet<&Word> = targets.iter().collect();
    let mut out: Vec<ConjugatingElement> = targets
        .into_iter()
        .flat_map(|v| {
            conjugators_within(h, v, r)
                .into_iter()
                .filter(|g| gamma.contains(g))
                .map(|g| ConjugatingElement { element: g, conjugate: v.clone() })
        })
        .collect();
    out.sort_by(|a, b| a.element.shortlex_cmp(&b.element));
    out
}

pub fn conjugation_series(gamma: &SubgroupHandle, h: &Word, targets: &[Word], s: f64, r: usize) -> Result<ConjugationSeries> {
    check_inputs(gamma, h, targets, s)?;
    let elements = conjugating_elements(gamma, h, targets, r);
    let mut counts = vec![BigUint::default(); r + 1];
    for e in &elements {
        counts[e.element.len()] += 1u32;
    }
    Ok(ConjugationSeries { elements, estimate: SeriesEstimate::from_counts(counts, s) })
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HalfExponentReport {
    pub exponent: f64,
    pub truncation_radius: usize,
    /// `max over g in K of exp((s/2) |g|)`.
    pub beta: f64,
    pub checked: usize,
    pub violations: usize,
    /// Smallest `ln(beta) - (s/2)|h| + s|g|` over the checked elements; never negative in a tree.
    pub worst_log_slack: Option<f64>,
    pub worst_element: Option<Word>,
}

/// Checks `exp(-s|g|) <= beta exp(-(s/2)|h|)` for every `g` conjugating `h` into `targets`.
pub fn half_exponent_check(gamma: &SubgroupHandle, h: &Word, targets: &[Word], s: f64, r: usize) -> Result<HalfExponentReport> {
    check_inputs(gamma, h, targets, s)?;
    if targets.is_empty() {
        return invalid("the target set must be nonempty");
    }
    let log_beta = targets.iter().map(|g| 0.5 * s * g.len() as f64).fold(f64::NEG_INFINITY, f64::max);
    let elements = conjugating_elements(gamma, h, targets, r);
    let mut worst: Option<(f64, Word)> = None;
    let mut violations = 0;
    for e in &elements {
        let slack = log_beta - 0.5 * s * h.len() as f64 + s * e.element.len() as f64;
        if slack < -1e-12 {
            violations += 1;
        }
        if worst.as_ref().is_none_or(|(w, _)| slack < *w) {
            worst = Some((slack, e.element.clone()));
        }
    }
    Ok(HalfExponentReport {
        exponent: s,
        truncation_radius: r,
        beta: log_beta.exp(),
        checked: elements.len(),
        violations,
        worst_log_slack: worst.as_ref().map(|w| w.0),
        worst_element: worst.map(|w| w.1),
    })
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ShortestElementReport {
    pub shortest: Word,
    pub series_value: f64,
    pub bound_value: f64,
    pub alpha: f64,
    /// Largest distance from the basepoint to the axis of a member of `K`.
    pub axis_distance: usize,
    /// Orbit multiplicity used in `alpha`.
    pub multiplicity: usize,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ShortestElementConstant {
    pub alpha: f64,
    pub axis_distance: usize,
    pub multiplicity: usize,
}

/// `alpha = m e^{2 s D} / (1 - e^{-s})` for a finite set `K` of nontrivial
/// elements, with `D` the largest basepoint-to-axis distance in `K` and
/// `m = 2 |K| (max translation length in K)`. It does not depend on `h`.
pub fn shortest_element_constant(targets: &[Word], s: f64) -> Result<ShortestElementConstant> {
    if !(s > 0.0) {
        return invalid(format!("the bound needs a positive exponent, got {s}"));
    }
    let mut distinct: Vec<&Word> = targets.iter().collect();
    distinct.sort();
    distinct.dedup();
    if distinct.is_empty() || distinct.iter().any(|g| g.is_empty()) {
        return invalid("target elements must be nontrivial and nonempty");
    }
    let axes: Vec<_> = distinct.iter().map(|g| tree_axis(g)).collect::<Result<_>>()?;
    let axis_distance = axes.iter().map(|a| a.distance_from_basepoint).max().unwrap_or(0);
    let max_translation = axes.iter().map(|a| a.translation_length).max().unwrap_or(1);
    let multiplicity = 2 * distinct.len() * max_translation;
    let alpha = multiplicity as f64 * (2.0 * s * axis_distance as f64).exp() / (1.0 - (-s).exp());
    Ok(ShortestElementConstant { alpha, axis_distance, multiplicity })
}

/// Compares the truncated series over `{g : g h g^-1 in K}` with
/// `alpha exp(-s |g_h|)`, where `g_h` is the shortlex-least solution and
/// `alpha = m e^{2 s D} / (1 - e^{-s})` with `D` the largest basepoint-to-axis
/// distance in `K` and `m = 2 |K| (max translation length in K)`.
pub fn shortest_element_bound(gamma: &SubgroupHandle, h: &Word, targets: &[Word], s: f64, r: usize) -> Result<ShortestElementReport> {
    check_inputs(gamma, h, targets, s)?;
    let ShortestElementConstant { alpha, axis_distance, multiplicity } = shortest_element_constant(targets, s)?;
    let series = conjugation_series(gamma, h, targets, s, r)?;
    let Some(first) = series.elements.first() else {
        return Err(Error::NotFound(format!("no element conjugates {h} into the targets within radius {r}")));
    };
    let bound_value = alpha * (-s * first.element.len() as f64).exp();
    let series_value = series.estimate.partial_sum;
    Ok(ShortestElementReport {
        shortest: first.element.clone(),
        series_value,
        bound_value,
        alpha,
        axis_distance,
        multiplicity,
        holds: series_value <= bound_value * (1.0 + 1e-12),
    })
}
