//! The expected critical exponent of a finite IRS and the half-dimension test.

use rayon::prelude::*;
use serde::Serialize;

use super::measure::FiniteIrs;
use crate::error::{invalid, Result};
use crate::series::{critical_exponent_estimate, ExponentEstimate};

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MemberExponent {
    pub index: usize,
    pub weight: f64,
    pub variant: &'static str,
    pub slope_estimate: f64,
    pub bracket: (f64, f64),
    pub period: usize,
    pub finite_group: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExpectedExponent {
    pub max_radius: usize,
    pub value: f64,
    pub members: Vec<MemberExponent>,
}

fn member_estimates(mu: &FiniteIrs, rmax: usize) -> Result<Vec<ExponentEstimate>> {
    mu.members().par_iter().map(|m| critical_exponent_estimate(&m.handle, rmax)).collect()
}

fn member_row(mu: &FiniteIrs, index: usize, e: &ExponentEstimate) -> MemberExponent {
    let m = &mu.members()[index];
    MemberExponent {
        index,
        weight: m.weight,
        variant: m.handle.variant_name(),
        slope_estimate: e.slope_estimate,
        bracket: e.bracket,
        period: e.period,
        finite_group: e.finite_group,
    }
}

/// `sum of weight * slope estimate` over the support.
pub fn expected_critical_exponent(mu: &FiniteIrs, rmax: usize) -> Result<ExpectedExponent> {
    let estimates = member_estimates(mu, rmax)?;
    let members: Vec<MemberExponent> = estimates.iter().enumerate().map(|(i, e)| member_row(mu, i, e)).collect();
    let value = members.iter().map(|m| m.weight * m.slope_estimate).sum();
    Ok(ExpectedExponent { max_radius: rmax, value, members })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Inconclusive,
    /// The bracket lies below the bound: the truncation is inadequate.
    Contradiction,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MemberVerdict {
    #[serde(flatten)]
    pub exponent: MemberExponent,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HalfDimensionReport {
    pub max_radius: usize,
    /// Half the boundary dimension, `ln(2k-1) / 2`.
    pub bound: f64,
    pub members: Vec<MemberVerdict>,
    pub verdict: Verdict,
}

/// Compares each member's exponent bracket with half the boundary dimension.
/// Finite members are rejected: the comparison only concerns infinite ones.
pub fn theorem_one_check(mu: &FiniteIrs, rmax: usize) -> Result<HalfDimensionReport> {
    let estimates = member_estimates(mu, rmax)?;
    if let Some(i) = estimates.iter().position(|e| e.finite_group) {
        return invalid(format!("member {i} is finite (no nonempty sphere up to radius {rmax})"));
    }
    let bound = ((2 * mu.rank() - 1) as f64).ln() / 2.0;
    let members: Vec<MemberVerdict> = estimates
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let verdict = if e.bracket.0 > bound {
                Verdict::Pass
            } else if e.bracket.1 < bound {
                Verdict::Contradiction
            } else {
                Verdict::Inconclusive
            };
            MemberVerdict { exponent: member_row(mu, i, e), verdict }
        })
        .collect();
    let verdict = members.iter().map(|m| m.verdict).max().unwrap_or(Verdict::Inconclusive);
    Ok(HalfDimensionReport { max_radius: rmax, bound, members, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::irs::{irs_from_finite_index, irs_from_normal};
    use crate::subgroups::SubgroupHandle;

    #[test]
    fn expected_exponent_examples() {
        let dirac = irs_from_normal(&SubgroupHandle::full(2)).unwrap();
        let e = expected_critical_exponent(&dirac, 20).unwrap();
        assert!((e.value - 3f64.ln()).abs() < 1e-12);
        let stab = SubgroupHandle::coset_stabilizer(corpus::three_cosets(), 0).unwrap();
        let mu = irs_from_finite_index(&stab).unwrap();
        let e = expected_critical_exponent(&mu, 14).unwrap();
        assert!((e.value - 3f64.ln()).abs() < 0.02, "{}", e.value);
    }

    #[test]
    fn finite_members_are_rejected() {
        let trivial = crate::irs::FiniteIrs::dirac(SubgroupHandle::trivial(2)).unwrap();
        assert!(theorem_one_check(&trivial, 10).is_err());
    }
}
