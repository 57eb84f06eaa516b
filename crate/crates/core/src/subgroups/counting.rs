//! Annulus counts and the normalized annulus table.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::handle::SubgroupHandle;
use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnnulusCount {
    pub r1: usize,
    pub r2: usize,
    #[serde(serialize_with = "crate::serde_big::biguint")]
    pub count: BigUint,
}

/// Elements `g` with `r1 <= |g| <= r2`.
pub fn annulus_count(h: &SubgroupHandle, r1: usize, r2: usize) -> Result<AnnulusCount> {
    if r1 > r2 {
        return invalid(format!("annulus radii out of order: {r1} > {r2}"));
    }
    let spheres = h.sphere_counts(r2);
    let count = spheres[r1..=r2].iter().fold(BigUint::zero(), |a, c| a + c);
    Ok(AnnulusCount { r1, r2, count })
}

/// Annulus counts from precomputed sphere counts; `spheres` must reach `r2`.
pub fn annulus_from_spheres(spheres: &[BigUint], r1: usize, r2: usize) -> BigUint {
    spheres[r1..=r2].iter().fold(BigUint::zero(), |a, c| a + c)
}

/// Natural log of a big count, accurate for values beyond `f64` range.
pub fn ln_big(n: &BigUint) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits < 1000 {
        return n.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    (n >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

#[derive(Debug, Clone, Serialize)]
pub struct AnnulusRatioRow {
    pub r: usize,
    #[serde(serialize_with = "crate::serde_big::biguint")]
    pub count: BigUint,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AnnulusRatioTable {
    pub window: usize,
    pub exponent: f64,
    pub rows: Vec<AnnulusRatioRow>,
    pub min: f64,
    pub max: f64,
    pub max_over_min: f64,
}

/// `|A[r, r+window]| * exp(-exponent * r)` for `r = 0..=rmax`, with the
/// closed annulus `r <= |g| <= r + window`.
pub fn coornaert_ratio(h: &SubgroupHandle, window: usize, rmax: usize, exponent: f64) -> Result<AnnulusRatioTable> {
    if window == 0 {
        return invalid("annulus window must be at least 1");
    }
    let spheres = h.sphere_counts(rmax + window);
    let rows: Vec<AnnulusRatioRow> = (0..=rmax)
        .map(|r| {
            let count = annulus_from_spheres(&spheres, r, r + window);
            let ratio = (ln_big(&count) - exponent * r as f64).exp();
            AnnulusRatioRow { r, count, ratio }
        })
        .collect();
    let min = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let max = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(AnnulusRatioTable { window, exponent, rows, min, max, max_over_min: max / min })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Word;
    use crate::subgroups::FiniteAction;

    #[test]
    fn annulus_examples() {
        let f2 = SubgroupHandle::full(2);
        assert_eq!(annulus_count(&f2, 1, 2).unwrap().count, BigUint::from(16u32));
        assert_eq!(annulus_count(&f2, 0, 0).unwrap().count, BigUint::from(1u32));
        assert_eq!(annulus_count(&SubgroupHandle::commutator(2), 0, 4).unwrap().count, BigUint::from(9u32));
        assert!(annulus_count(&f2, 3, 2).is_err());
    }

    #[test]
    fn full_group_ratio_is_constant() {
        let t = coornaert_ratio(&SubgroupHandle::full(2), 1, 20, 3f64.ln()).unwrap();
        // 4 * 3^(r-1) + 4 * 3^r over 3^r.
        for row in &t.rows[1..] {
            assert!((row.ratio - 16.0 / 3.0).abs() < 1e-9);
        }
        assert!((t.rows[0].ratio - 5.0).abs() < 1e-12);
    }

    #[test]
    fn cyclic_ratio() {
        let a = SubgroupHandle::cyclic(2, &Word::parse("a").unwrap()).unwrap();
        let t = coornaert_ratio(&a, 1, 10, 0.0).unwrap();
        assert!(t.rows[1..].iter().all(|r| (r.ratio - 4.0).abs() < 1e-12));
    }

    #[test]
    fn index_three_ratio_is_bounded() {
        let act = FiniteAction::new(vec![vec![1, 2, 0], vec![1, 0, 2]]).unwrap();
        let h = SubgroupHandle::coset_stabilizer(act, 0).unwrap();
        let t = coornaert_ratio(&h, 2, 14, 3f64.ln()).unwrap();
        assert!(t.max_over_min < 10.0, "{}", t.max_over_min);
    }

    #[test]
    fn ln_big_handles_huge_values() {
        let n = BigUint::from(3u32).pow(2000);
        assert!((ln_big(&n) - 2000.0 * 3f64.ln()).abs() < 1e-9 * 2000.0);
    }
}
