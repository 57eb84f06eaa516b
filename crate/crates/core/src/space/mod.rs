//! Geometry of the two model spaces: the Cayley tree of `F_k` (exact) and the
//! upper half-plane (double precision).
//!
//! The typed APIs live in [`tree`] and [`plane`]; this module adds a small
//! model-agnostic layer over [`Point`], [`BoundaryPoint`] and [`Isometry`] for
//! callers that only learn the model at run time.

pub mod plane;
pub mod tree;
pub mod word;

use serde::{Deserialize, Serialize};

pub use plane::{IsometryClass, PlaneEnd, PlaneIsometry, PlanePoint};
pub use tree::{tree_axis, tree_dist, tree_gromov_product, TreeAxis, TreeEnd, TreeModel};
pub use word::{Letter, Word};

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Point {
    Tree(Word),
    Plane(PlanePoint),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BoundaryPoint {
    Tree(TreeEnd),
    Plane(PlaneEnd),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Isometry {
    Tree(Word),
    Plane(PlaneIsometry),
}

fn mixed() -> Error {
    Error::InvalidInput("arguments come from different models".into())
}

pub fn dist(x: &Point, y: &Point) -> Result<f64> {
    match (x, y) {
        (Point::Tree(a), Point::Tree(b)) => Ok(tree_dist(a, b) as f64),
        (Point::Plane(a), Point::Plane(b)) => Ok(a.dist(b)),
        _ => Err(mixed()),
    }
}

/// `(x|y)_o = (d(x,o) + d(y,o) - d(x,y)) / 2`.
pub fn gromov_product(x: &Point, y: &Point, o: &Point) -> Result<f64> {
    let dxo = dist(x, o)?;
    let dyo = dist(y, o)?;
    let dxy = dist(x, y)?;
    Ok(0.5 * (dxo + dyo - dxy))
}

/// Visual distance with parameter `e` seen from the tree basepoint.
///
/// Only the tree boundary carries a visual metric here; the plane boundary is
/// handled through real coordinates directly.
pub fn visual_distance(xi: &BoundaryPoint, eta: &BoundaryPoint) -> Result<f64> {
    visual_distance_with(xi, eta, std::f64::consts::E)
}

pub fn visual_distance_with(xi: &BoundaryPoint, eta: &BoundaryPoint, a: f64) -> Result<f64> {
    if !(a > 1.0) {
        return invalid(format!("visual parameter must exceed 1, got {a}"));
    }
    match (xi, eta) {
        (BoundaryPoint::Tree(x), BoundaryPoint::Tree(y)) => Ok(x.visual_distance(y, a)),
        (BoundaryPoint::Plane(_), BoundaryPoint::Plane(_)) => Err(Error::Unsupported(
            "visual distance on the plane boundary; use real coordinates".into(),
        )),
        _ => Err(mixed()),
    }
}

pub fn busemann(xi: &BoundaryPoint, x: &Point, y: &Point) -> Result<f64> {
    match (xi, x, y) {
        (BoundaryPoint::Tree(e), Point::Tree(a), Point::Tree(b)) => Ok(e.busemann(a, b) as f64),
        (BoundaryPoint::Plane(e), Point::Plane(a), Point::Plane(b)) => Ok(e.busemann(a, b)),
        _ => Err(mixed()),
    }
}

/// Free actions on trees have no elliptic or parabolic elements, so a word is
/// either the identity or hyperbolic.
pub fn classify_isometry(g: &Isometry) -> IsometryClass {
    match g {
        Isometry::Tree(w) if w.is_empty() => IsometryClass::Identity,
        Isometry::Tree(_) => IsometryClass::Hyperbolic,
        Isometry::Plane(m) => m.classify(),
    }
}

/// Repelling and attracting endpoints and the translation length.
pub fn axis_endpoints(h: &Isometry) -> Result<(BoundaryPoint, BoundaryPoint, f64)> {
    match h {
        Isometry::Tree(w) => {
            let ax = tree_axis(w)?;
            Ok((
                BoundaryPoint::Tree(ax.repelling),
                BoundaryPoint::Tree(ax.attracting),
                ax.translation_length as f64,
            ))
        }
        Isometry::Plane(m) => {
            let (minus, plus, len) = m.axis()?;
            Ok((BoundaryPoint::Plane(minus), BoundaryPoint::Plane(plus), len))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tw(s: &str) -> Point {
        Point::Tree(Word::parse(s).unwrap())
    }

    #[test]
    fn mixed_models_are_rejected() {
        let t = tw("ab");
        let p = Point::Plane(PlanePoint::i());
        assert!(matches!(dist(&t, &p), Err(Error::InvalidInput(_))));
        let xi = BoundaryPoint::Plane(PlaneEnd::Infinity);
        assert!(matches!(visual_distance(&xi, &xi), Err(Error::Unsupported(_))));
        assert!(busemann(&xi, &t, &t).is_err());
    }

    #[test]
    fn generic_layer_agrees_with_typed_layer() {
        assert_eq!(dist(&tw("e"), &tw("ab")).unwrap(), 2.0);
        assert_eq!(gromov_product(&tw("ab"), &tw("abb"), &tw("e")).unwrap(), 2.0);
        assert_eq!(classify_isometry(&Isometry::Tree(Word::parse("ab").unwrap())), IsometryClass::Hyperbolic);
        assert_eq!(classify_isometry(&Isometry::Tree(Word::identity())), IsometryClass::Identity);
        let (_, _, len) = axis_endpoints(&Isometry::Tree(Word::parse("abA").unwrap())).unwrap();
        assert_eq!(len, 1.0);
        let xi = BoundaryPoint::Tree(TreeEnd::parse("(a)").unwrap());
        assert_eq!(busemann(&xi, &tw("e"), &tw("a")).unwrap(), 1.0);
        assert!(visual_distance_with(&xi, &xi, 1.0).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;
        use rand::{Rng, SeedableRng};
        use rand_chacha::ChaCha8Rng;

        fn word(max: usize) -> impl Strategy<Value = Word> {
            prop::collection::vec((0usize..2, any::<bool>()), 0..max)
                .prop_map(|v| Word::reduce(v.into_iter().map(|(g, i)| Letter::new(g, i))))
        }

        fn end() -> impl Strategy<Value = TreeEnd> {
            (word(6), word(4), any::<u64>()).prop_map(|(p, t, seed)| {
                // Force a valid end: append a fresh letter to the tail if needed.
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut tail = t;
                while tail.is_empty() || !tail.is_cyclically_reduced() || p.last().zip(tail.first()).is_some_and(|(a, b)| a == b.inverse()) {
                    tail = Word::reduce((0..3).map(|_| Letter::new(rng.gen_range(0..2), rng.gen())));
                }
                TreeEnd::new(p, tail).unwrap()
            })
        }

        proptest! {
            #[test]
            fn tree_triangle_and_tripod(x in word(10), y in word(10), z in word(10)) {
                let o = Word::identity();
                prop_assert!(tree_dist(&x, &z) <= tree_dist(&x, &y) + tree_dist(&y, &z));
                let mut g = [
                    tree_gromov_product(&x, &y, &o),
                    tree_gromov_product(&y, &z, &o),
                    tree_gromov_product(&x, &z, &o),
                ];
                g.sort();
                prop_assert_eq!(g[0], g[1]);
                // Tree product equals the metric formula.
                let f = gromov_product(&Point::Tree(x.clone()), &Point::Tree(y.clone()), &Point::Tree(o.clone())).unwrap();
                prop_assert_eq!(f, tree_gromov_product(&x, &y, &o) as f64);
            }

            #[test]
            fn tree_busemann_cocycle(xi in end(), x in word(8), y in word(8), z in word(8)) {
                prop_assert_eq!(xi.busemann(&x, &z), xi.busemann(&x, &y) + xi.busemann(&y, &z));
                prop_assert!(xi.busemann(&x, &y).unsigned_abs() as usize <= tree_dist(&x, &y));
                prop_assert_eq!(xi.busemann(&x, &x), 0);
            }

            #[test]
            fn busemann_is_a_limit(xi in end(), x in word(6), y in word(6)) {
                let z = xi.truncate(x.len() + y.len() + xi.prefix().len() + 2 * xi.tail().len() + 2);
                let lim = tree_dist(&x, &z) as i64 - tree_dist(&y, &z) as i64;
                prop_assert_eq!(xi.busemann(&x, &y), lim);
            }

            #[test]
            fn visual_metric_bracket(a in end(), b in end()) {
                // rho = e^{-(a|b)} exactly, so the bracket holds with k1 = k2 = 1.
                let rho = a.visual_distance(&b, std::f64::consts::E);
                match a.gromov_product(&b) {
                    None => prop_assert_eq!(rho, 0.0),
                    Some(n) => prop_assert!((rho - (-(n as f64)).exp()).abs() <= 1e-15),
                }
            }

            #[test]
            fn axis_equivariance(h in word(8), g in word(8)) {
                prop_assume!(!h.is_empty());
                let ax = tree_axis(&h).unwrap();
                let cx = tree_axis(&h.conjugate_by(&g)).unwrap();
                prop_assert_eq!(ax.repelling.translate(&g), cx.repelling);
                prop_assert_eq!(ax.attracting.translate(&g), cx.attracting);
                prop_assert_eq!(ax.translation_length, cx.translation_length);
            }
        }
    }
}
