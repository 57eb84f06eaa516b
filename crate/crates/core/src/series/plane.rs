//! Orbit series for small groups of plane isometries: a cyclic hyperbolic
//! group and a two-generator Schottky group. Words are enumerated directly.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::space::{Letter, PlaneIsometry, PlanePoint, TreeModel};

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PlaneOrbitSeries {
    pub exponent: f64,
    pub max_word_length: usize,
    pub partial_sum: f64,
    /// Orbit distances from the base point, ordered by word.
    pub distances: Vec<f64>,
}

/// `sum over reduced words g of length <= L in the generators of exp(-s d(o, g o))`.
/// The generators are assumed to generate a free group freely, as for a Schottky group.
pub fn plane_orbit_series(generators: &[PlaneIsometry], base: PlanePoint, s: f64, max_len: usize) -> Result<PlaneOrbitSeries> {
    if generators.is_empty() {
        return invalid("need at least one generator");
    }
    if !(s >= 0.0) {
        return invalid(format!("exponent must be nonnegative, got {s}"));
    }
    let matrix = |l: Letter| {
        let g = &generators[l.generator()];
        if l.is_inverse() {
            g.inverse()
        } else {
            *g
        }
    };
    let words = if generators.len() == 1 {
        (0..=max_len as i64)
            .flat_map(|n| if n == 0 { vec![0] } else { vec![n, -n] })
            .map(|n| (0..n.unsigned_abs()).map(|_| Letter::new(0, n < 0)).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    } else {
        TreeModel::new(generators.len())?.ball(max_len).into_iter().map(|w| w.letters().to_vec()).collect()
    };
    let distances: Vec<f64> = words
        .iter()
        .map(|w| {
            let g = w.iter().fold(PlaneIsometry::identity(), |acc, &l| acc.compose(&matrix(l)));
            base.dist(&g.apply(&base))
        })
        .collect();
    let partial_sum = distances.iter().map(|d| (-s * d).exp()).sum();
    Ok(PlaneOrbitSeries { exponent: s, max_word_length: max_len, partial_sum, distances })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_group_closed_form() {
        let lambda: f64 = 2.0;
        let g = PlaneIsometry::diagonal(lambda).unwrap();
        let s = 0.3;
        let est = plane_orbit_series(&[g], PlanePoint::i(), s, 10).unwrap();
        // d(i, lambda^{2n} i) = 2 |n| ln lambda.
        let expected: f64 = (-10i32..=10).map(|n| (-s * 2.0 * n.abs() as f64 * lambda.ln()).exp()).sum();
        assert!((est.partial_sum - expected).abs() < 1e-9);
    }

    #[test]
    fn schottky_partial_sums_grow_and_stay_finite() {
        let a = PlaneIsometry::diagonal(3.0).unwrap();
        // Conjugate of the same translation with axis from -1 to 1.
        let c = PlaneIsometry::new(1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt(), 1.0 / 2f64.sqrt(), 1.0 / 2f64.sqrt()).unwrap();
        let b = c.compose(&a).compose(&c.inverse());
        let s = 1.0;
        let mut last = 0.0;
        for l in 1..=6 {
            let est = plane_orbit_series(&[a, b], PlanePoint::i(), s, l).unwrap();
            assert!(est.partial_sum.is_finite() && est.partial_sum > last);
            // Distinct orbit points for distinct words.
            assert!(est.distances.iter().skip(1).all(|&d| d > 1e-6));
            last = est.partial_sum;
        }
    }
}
