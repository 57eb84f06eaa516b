//! Critical exponent estimates and the divergence diagnostic.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use super::poincare::{SeriesEstimate, GEOMETRIC_RATIO};
use crate::error::{invalid, Result};
use crate::subgroups::{ln_big, SubgroupHandle};

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DifferenceEstimate {
    pub radius: usize,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExponentEstimate {
    pub max_radius: usize,
    /// `gcd` of the lengths of nonempty spheres; estimates compare spheres this far apart.
    pub period: usize,
    #[serde(serialize_with = "crate::serde_big::biguint_vec")]
    pub sphere_counts: Vec<BigUint>,
    /// `ln` of the ball count for each radius.
    pub log_counts: Vec<f64>,
    /// `(ln n_{R+p} - ln n_R) / p` over sphere counts, where both spheres are nonempty.
    pub difference_estimates: Vec<DifferenceEstimate>,
    pub slope_estimate: f64,
    pub bracket: (f64, f64),
    /// `ln(ball_R) / R`, the quantity whose liminf defines the exponent.
    pub ratio_estimates: Vec<f64>,
    pub ratio_bracket: (f64, f64),
    pub finite_group: bool,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Estimates from precomputed sphere counts `n_0..n_Rmax`.
pub fn exponent_from_counts(counts: Vec<BigUint>) -> Result<ExponentEstimate> {
    let rmax = counts.len().saturating_sub(1);
    if rmax < 2 {
        return invalid(format!("need a radius of at least 2, got {rmax}"));
    }
    let mut ball = BigUint::zero();
    let log_counts: Vec<f64> = counts
        .iter()
        .map(|c| {
            ball += c;
            ln_big(&ball)
        })
        .collect();
    let ratio_estimates: Vec<f64> = (1..=rmax).map(|r| log_counts[r] / r as f64).collect();
    let tail = rmax.div_ceil(4);
    let window = |v: &[f64]| -> (f64, f64) {
        let last = &v[v.len().saturating_sub(tail)..];
        (last.iter().cloned().fold(f64::INFINITY, f64::min), last.iter().cloned().fold(f64::NEG_INFINITY, f64::max))
    };
    let ratio_bracket = window(&ratio_estimates);

    let period = (1..=rmax).filter(|&n| !counts[n].is_zero()).fold(0, gcd);
    if period == 0 {
        return Ok(ExponentEstimate {
            max_radius: rmax,
            period: 0,
            sphere_counts: counts,
            log_counts,
            difference_estimates: Vec::new(),
            slope_estimate: 0.0,
            bracket: (0.0, 0.0),
            ratio_estimates,
            ratio_bracket,
            finite_group: true,
        });
    }
    let difference_estimates: Vec<DifferenceEstimate> = (0..=rmax.saturating_sub(period))
        .filter(|&r| !counts[r].is_zero() && !counts[r + period].is_zero())
        .map(|r| DifferenceEstimate {
            radius: r,
            value: (ln_big(&counts[r + period]) - ln_big(&counts[r])) / period as f64,
        })
        .collect();
    let values: Vec<f64> = difference_estimates.iter().map(|d| d.value).collect();
    let (bracket, slope_estimate) = if values.is_empty() {
        // Too few nonempty spheres below the radius to compare.
        ((0.0, f64::INFINITY), f64::NAN)
    } else {
        let last = &values[values.len().saturating_sub(tail)..];
        (window(&values), last.iter().sum::<f64>() / last.len() as f64)
    };
    Ok(ExponentEstimate {
        max_radius: rmax,
        period,
        sphere_counts: counts,
        log_counts,
        difference_estimates,
        slope_estimate,
        bracket,
        ratio_estimates,
        ratio_bracket,
        finite_group: false,
    })
}

pub fn critical_exponent_estimate(h: &SubgroupHandle, rmax: usize) -> Result<ExponentEstimate> {
    if rmax < 2 {
        return invalid(format!("need a radius of at least 2, got {rmax}"));
    }
    exponent_from_counts(h.sphere_counts(rmax))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthClass {
    LinearOrFaster,
    ApparentlyBounded,
    Inconclusive,
}

/// Least-squares slope of `ln(increment)` against `ln(radius)` at or above which
/// increments count as not decaying.
pub const FLAT_SLOPE: f64 = -0.05;

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DivergenceReport {
    pub exponent: f64,
    pub truncation_radius: usize,
    pub period: usize,
    pub partial_sums: Vec<f64>,
    /// `S_R - S_{R-p}` for the blocks ending in the last half of the radii.
    pub block_increments: Vec<(usize, f64)>,
    pub log_log_slope: Option<f64>,
    pub classification: GrowthClass,
    pub note: String,
}

/// Classifies the growth of partial sums at `s`. Finite data cannot decide
/// divergence, so the answer is a diagnostic tied to the truncation radius.
pub fn divergence_diagnostic(h: &SubgroupHandle, s: f64, rmax: usize) -> Result<DivergenceReport> {
    if !(s >= 0.0) {
        return invalid(format!("exponent must be nonnegative, got {s}"));
    }
    if rmax < 4 {
        return invalid(format!("need a radius of at least 4, got {rmax}"));
    }
    Ok(diagnose(&SeriesEstimate::from_counts(h.sphere_counts(rmax), s)))
}

pub fn diagnose(est: &SeriesEstimate) -> DivergenceReport {
    let rmax = est.truncation_radius;
    let partial_sums = est.cumulative();
    let period = (1..=rmax).filter(|&n| !est.counts[n].is_zero()).fold(0, gcd).max(1);
    let mut blocks = Vec::new();
    let mut r = rmax;
    while r >= period && r - period >= rmax / 2 {
        blocks.push((r, partial_sums[r] - partial_sums[r - period]));
        r -= period;
    }
    blocks.reverse();
    let positive = blocks.len() >= 2 && blocks.iter().all(|&(_, b)| b > 0.0);
    let log_log_slope = positive.then(|| {
        let xs: Vec<f64> = blocks.iter().map(|&(r, _)| (r as f64).ln()).collect();
        let ys: Vec<f64> = blocks.iter().map(|&(_, b)| b.ln()).collect();
        let n = xs.len() as f64;
        let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        sxy / sxx
    });
    let ratios: Vec<f64> = blocks.windows(2).map(|w| w[1].1 / w[0].1).collect();
    let geometric = positive
        && ratios.iter().all(|&q| q < GEOMETRIC_RATIO)
        && ratios.windows(2).all(|w| w[1] <= w[0] + 1e-9);
    let classification = if log_log_slope.is_some_and(|m| m >= FLAT_SLOPE) {
        GrowthClass::LinearOrFaster
    } else if geometric {
        GrowthClass::ApparentlyBounded
    } else {
        GrowthClass::Inconclusive
    };
    DivergenceReport {
        exponent: est.exponent,
        truncation_radius: rmax,
        period,
        partial_sums,
        block_increments: blocks,
        log_log_slope,
        classification,
        note: format!("diagnostic from partial sums up to radius {rmax}; not a proof of divergence or convergence"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Word;

    #[test]
    fn full_group_differences_are_exact() {
        let e = critical_exponent_estimate(&SubgroupHandle::full(2), 20).unwrap();
        assert_eq!(e.period, 1);
        for d in e.difference_estimates.iter().filter(|d| d.radius >= 1) {
            assert!((d.value - 3f64.ln()).abs() < 1e-12);
        }
        assert!((e.slope_estimate - 3f64.ln()).abs() < 1e-12);
        assert!(e.bracket.0 <= e.slope_estimate && e.slope_estimate <= e.bracket.1);
    }

    #[test]
    fn cyclic_has_exponent_zero() {
        let h = SubgroupHandle::cyclic(2, &Word::parse("a").unwrap()).unwrap();
        let e = critical_exponent_estimate(&h, 20).unwrap();
        assert_eq!(e.slope_estimate, 0.0);
        assert!(!e.finite_group);
    }

    #[test]
    fn trivial_group_is_flagged() {
        let e = critical_exponent_estimate(&SubgroupHandle::trivial(2), 10).unwrap();
        assert!(e.finite_group);
        assert_eq!(e.slope_estimate, 0.0);
        assert!(critical_exponent_estimate(&SubgroupHandle::full(2), 1).is_err());
    }

    #[test]
    fn diagnostic_examples() {
        let f2 = SubgroupHandle::full(2);
        let ln3 = 3f64.ln();
        assert_eq!(divergence_diagnostic(&f2, ln3, 20).unwrap().classification, GrowthClass::LinearOrFaster);
        assert_eq!(divergence_diagnostic(&f2, ln3 + 0.5, 20).unwrap().classification, GrowthClass::ApparentlyBounded);
        let a = SubgroupHandle::cyclic(2, &Word::parse("a").unwrap()).unwrap();
        assert_eq!(divergence_diagnostic(&a, 0.0, 20).unwrap().classification, GrowthClass::LinearOrFaster);
    }
}
