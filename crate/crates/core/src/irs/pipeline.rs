//! The chain of series inequalities behind divergence at half the dimension,
//! and the summed cocycle bounds, all evaluated at a truncation radius.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::measure::FiniteIrs;
use crate::boundary::{full_group_cover_multiplicity, DensityAtlas, DensityFamily};
use crate::error::{invalid, Error, Result};
use crate::series::{poincare_partial, shortest_element_constant};
use crate::space::{TreeModel, Word};
use crate::subgroups::SubgroupHandle;

/// Relative slack allowed when comparing truncated floating-point sums.
const REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DivergenceChain {
    pub exponent: f64,
    pub radius: usize,
    /// Radius of the half-exponent series: `2R + max |v|`.
    pub series_radius: usize,
    pub alpha: f64,
    pub beta: f64,
    /// The series of the subgroup at half the exponent.
    pub half_exponent_series: f64,
    /// `sum over h in the subgroup of exp(-exponent |g_h|)`, `g_h` a shortest conjugator into `V`.
    pub shortest_conjugator_sum: f64,
    /// `sum over h in the subgroup of the series over {g : g h g^-1 in V}`.
    pub conjugation_sum: f64,
    /// The series over `{g : g H g^-1 meets V}`.
    pub meeting_series: f64,
    pub conjugates_found: usize,
    /// `half_exponent_series >= conjugation_sum / (alpha beta)`.
    pub first_holds: bool,
    /// `conjugation_sum >= meeting_series`.
    pub second_holds: bool,
    pub empty_chain: bool,
}

/// Evaluates the chain for a subgroup `H`, a finite set `V` of nontrivial
/// elements and conjugators `g` with `|g| <= R`. The exponent defaults to the
/// boundary dimension `ln(2k-1)`.
pub fn divergence_pipeline(h: &SubgroupHandle, v: &[Word], radius: usize, exponent: Option<f64>) -> Result<DivergenceChain> {
    let rank = h.rank();
    if v.is_empty() || v.iter().any(|w| w.is_empty()) {
        return invalid("V must be a nonempty set of nontrivial elements");
    }
    if let Some(w) = v.iter().find(|w| !w.fits_rank(rank)) {
        return invalid(format!("{w} does not fit rank {rank}"));
    }
    let s = exponent.unwrap_or(((2 * rank - 1) as f64).ln());
    let alpha = shortest_element_constant(v, s)?.alpha;
    let longest = v.iter().map(|w| w.len()).max().unwrap_or(0);
    let beta = (0.5 * s * longest as f64).exp();
    let series_radius = 2 * radius + longest;
    let half = poincare_partial(h, s / 2.0, series_radius)?;
    if half.counts.iter().skip(1).all(|c| c == &num_bigint::BigUint::ZERO) {
        return invalid("the subgroup must be infinite");
    }

    let mut shortest: BTreeMap<Word, usize> = BTreeMap::new();
    let mut conjugation_sum = 0.0;
    let mut meeting_series = 0.0;
    for g in TreeModel::new(rank)?.ball(radius) {
        let weight = (-s * g.len() as f64).exp();
        let ginv = g.inverse();
        let mut meets = false;
        for target in v {
            let conj = target.conjugate_by(&ginv);
            if h.contains(&conj) {
                conjugation_sum += weight;
                meets = true;
                let e = shortest.entry(conj).or_insert(g.len());
                *e = (*e).min(g.len());
            }
        }
        if meets {
            meeting_series += weight;
        }
    }
    let shortest_conjugator_sum: f64 = shortest.values().map(|&n| (-s * n as f64).exp()).sum();
    let rhs = conjugation_sum / (alpha * beta);
    Ok(DivergenceChain {
        exponent: s,
        radius,
        series_radius,
        alpha,
        beta,
        half_exponent_series: half.partial_sum,
        shortest_conjugator_sum,
        conjugation_sum,
        meeting_series,
        conjugates_found: shortest.len(),
        first_holds: half.partial_sum >= rhs * (1.0 - REL_TOL),
        second_holds: conjugation_sum >= meeting_series * (1.0 - REL_TOL),
        empty_chain: shortest.is_empty(),
    })
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CocycleSumRow {
    pub radius: usize,
    pub annulus_count: usize,
    pub cocycle_sum: f64,
    pub bound: f64,
    /// `ln(bound) - ln(cocycle_sum)`.
    pub log_margin: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MemberCocycleSums {
    pub index: usize,
    pub weight: f64,
    /// Smallest `c` with `pi(g) <= c nu_o(S_R(o, g^-1 o)) exp(delta |g|)` on the tested elements.
    pub shadow_constant: f64,
    pub rows: Vec<CocycleSumRow>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InverseTrickRow {
    pub radius: usize,
    pub weighted_count: f64,
    pub weighted_cocycle_sum: f64,
    /// `2 d^12` times the weighted cocycle sum.
    pub bound: f64,
    pub log_margin: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SummedCocycleReport {
    pub exponent: f64,
    pub width: usize,
    pub shadow_radius: usize,
    pub max_radius: usize,
    pub distortion: f64,
    pub members: Vec<MemberCocycleSums>,
    pub inverse_trick: Vec<InverseTrickRow>,
    pub all_hold: bool,
}

/// For each member `H` of the IRS and `r <= rmax`, compares the cocycle sum over
/// the annulus `A[r, r+k]` with `c p e^{delta k} e^{delta r}`, where `c` is the
/// shadow constant and `p` the cover multiplicity of the annulus shadows; then
/// compares the weighted annulus counts with `2 d^12` times the weighted sums.
/// The set of subgroups conjugated into is the whole support, so every `g` counts.
pub fn summed_cocycle_check(
    mu: &FiniteIrs,
    atlas: &DensityAtlas,
    width: usize,
    rmax: usize,
    shadow_radius: usize,
    exponent: f64,
) -> Result<SummedCocycleReport> {
    if !(exponent > 0.0) {
        return invalid(format!("exponent must be positive, got {exponent}"));
    }
    let densities: Vec<&DensityFamily> = mu
        .members()
        .iter()
        .enumerate()
        .map(|(i, m)| atlas.get(&m.handle).ok_or_else(|| Error::NotFound(format!("no density for IRS member {i}"))))
        .collect::<Result<_>>()?;
    let rank = mu.rank();
    let ball = TreeModel::new(rank)?.ball(rmax + width);
    let members: Vec<MemberCocycleSums> = densities
        .par_iter()
        .enumerate()
        .map(|(index, density)| member_sums(index, mu.members()[index].weight, density, &ball, width, rmax, shadow_radius, exponent))
        .collect();
    let distortion = densities.iter().map(|d| d.distortion()).fold(1.0, f64::max);
    let inverse_trick: Vec<InverseTrickRow> = (0..=rmax)
        .map(|r| {
            let weighted_count: f64 = members.iter().map(|m| mu.members()[m.index].weight * m.rows[r].annulus_count as f64).sum();
            let weighted_cocycle_sum: f64 = members.iter().map(|m| mu.members()[m.index].weight * m.rows[r].cocycle_sum).sum();
            let bound = 2.0 * distortion.powi(12) * weighted_cocycle_sum;
            InverseTrickRow { radius: r, weighted_count, weighted_cocycle_sum, bound, log_margin: bound.ln() - weighted_count.ln() }
        })
        .collect();
    let all_hold = members.iter().flat_map(|m| &m.rows).all(|r| r.log_margin >= -REL_TOL)
        && inverse_trick.iter().all(|r| r.log_margin >= -REL_TOL);
    Ok(SummedCocycleReport {
        exponent,
        width,
        shadow_radius,
        max_radius: rmax,
        distortion,
        members,
        inverse_trick,
        all_hold,
    })
}

#[allow(clippy::too_many_arguments)]
fn member_sums(
    index: usize,
    weight: f64,
    density: &DensityFamily,
    ball: &[Word],
    width: usize,
    rmax: usize,
    shadow_radius: usize,
    exponent: f64,
) -> MemberCocycleSums {
    let o = Word::identity();
    let mut by_length = vec![(0usize, 0.0f64); rmax + width + 1];
    let mut shadow_constant: f64 = 0.0;
    for g in ball {
        let ginv = g.inverse();
        let pi = density.total_mass_at(&ginv);
        let stem = if ginv.len() <= shadow_radius { Word::identity() } else { ginv.prefix(ginv.len() - shadow_radius) };
        let shadow_mass = density.mass_at(&o, &stem);
        shadow_constant = shadow_constant.max(pi / (shadow_mass * (exponent * g.len() as f64).exp()));
        by_length[g.len()].0 += 1;
        by_length[g.len()].1 += pi;
    }
    let rows = (0..=rmax)
        .map(|r| {
            let (count, sum) = by_length[r..=r + width].iter().fold((0, 0.0), |(c, s), &(n, p)| (c + n, s + p));
            let p = full_group_cover_multiplicity(density.rank(), width, shadow_radius, r);
            let bound = shadow_constant * p as f64 * (exponent * (width + r) as f64).exp();
            CocycleSumRow { radius: r, annulus_count: count, cocycle_sum: sum, bound, log_margin: bound.ln() - sum.ln() }
        })
        .collect();
    MemberCocycleSums { index, weight, shadow_constant, rows }
}
