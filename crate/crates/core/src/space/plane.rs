//! Upper half-plane model of the hyperbolic plane and its real Mobius isometries.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Comparison tolerance for plane computations.
pub const PLANE_TOL: f64 = 1e-9;
/// Tolerance on `ad - bc = 1`.
pub const DET_TOL: f64 = 1e-12;

/// A point `re + i im` with `im > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanePoint {
    re: f64,
    im: f64,
}

impl PlanePoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !(im > 0.0) || !re.is_finite() || !im.is_finite() {
            return invalid(format!("({re}, {im}) is not in the upper half-plane"));
        }
        Ok(PlanePoint { re, im })
    }

    pub fn i() -> Self {
        PlanePoint { re: 0.0, im: 1.0 }
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    /// Hyperbolic distance, via `2 asinh(|z - w| / (2 sqrt(Im z Im w)))`.
    pub fn dist(&self, other: &PlanePoint) -> f64 {
        let dx = self.re - other.re;
        let dy = self.im - other.im;
        let chord = (dx * dx + dy * dy).sqrt();
        2.0 * (chord / (2.0 * (self.im * other.im).sqrt())).asinh()
    }
}

/// A point of the boundary circle `R u {inf}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PlaneEnd {
    Real(f64),
    Infinity,
}

impl PlaneEnd {
    pub fn approx_eq(&self, other: &PlaneEnd) -> bool {
        match (self, other) {
            (PlaneEnd::Infinity, PlaneEnd::Infinity) => true,
            (PlaneEnd::Real(a), PlaneEnd::Real(b)) => (a - b).abs() <= PLANE_TOL * (1.0 + a.abs()),
            _ => false,
        }
    }

    /// Busemann function `beta_xi(x, y)`. For `xi = inf` this is
    /// `ln Im y - ln Im x`; a real `xi` is first sent to `inf` by `z -> -1/(z - xi)`.
    pub fn busemann(&self, x: &PlanePoint, y: &PlanePoint) -> f64 {
        match *self {
            PlaneEnd::Infinity => y.im.ln() - x.im.ln(),
            PlaneEnd::Real(xi) => {
                let height = |p: &PlanePoint| {
                    let dx = p.re - xi;
                    p.im / (dx * dx + p.im * p.im)
                };
                height(y).ln() - height(x).ln()
            }
        }
    }
}

/// Conjugacy type of an isometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IsometryClass {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

/// The Mobius map `z -> (a z + b) / (c z + d)` with `ad - bc = 1`, taken up to sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneIsometry {
    entries: [f64; 4],
}

impl PlaneIsometry {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det - 1.0).abs().le(&DET_TOL) {
            return invalid(format!("determinant {det} differs from 1"));
        }
        Ok(PlaneIsometry { entries: [a, b, c, d] })
    }

    pub fn from_entries(e: [f64; 4]) -> Result<Self> {
        PlaneIsometry::new(e[0], e[1], e[2], e[3])
    }

    pub fn identity() -> Self {
        PlaneIsometry { entries: [1.0, 0.0, 0.0, 1.0] }
    }

    /// `diag(lambda, 1/lambda)`: translation by `2 ln lambda` along the imaginary axis.
    pub fn diagonal(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return invalid("diagonal entry must be positive");
        }
        Ok(PlaneIsometry { entries: [lambda, 0.0, 0.0, 1.0 / lambda] })
    }

    pub fn entries(&self) -> [f64; 4] {
        self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries[0] + self.entries[3]
    }

    pub fn compose(&self, other: &PlaneIsometry) -> PlaneIsometry {
        let [a, b, c, d] = self.entries;
        let [e, f, g, h] = other.entries;
        PlaneIsometry {
            entries: [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h],
        }
    }

    pub fn inverse(&self) -> PlaneIsometry {
        let [a, b, c, d] = self.entries;
        PlaneIsometry { entries: [d, -b, -c, a] }
    }

    pub fn apply(&self, z: &PlanePoint) -> PlanePoint {
        let [a, b, c, d] = self.entries;
        // (a z + b)/(c z + d) with z = x + iy.
        let (x, y) = (z.re, z.im);
        let den_re = c * x + d;
        let den_im = c * y;
        let num_re = a * x + b;
        let num_im = a * y;
        let den2 = den_re * den_re + den_im * den_im;
        PlanePoint {
            re: (num_re * den_re + num_im * den_im) / den2,
            im: (num_im * den_re - num_re * den_im) / den2,
        }
    }

    pub fn apply_end(&self, xi: &PlaneEnd) -> PlaneEnd {
        let [a, b, c, d] = self.entries;
        match *xi {
            PlaneEnd::Infinity => {
                if c.abs() <= PLANE_TOL {
                    PlaneEnd::Infinity
                } else {
                    PlaneEnd::Real(a / c)
                }
            }
            PlaneEnd::Real(x) => {
                let den = c * x + d;
                if den.abs() <= PLANE_TOL {
                    PlaneEnd::Infinity
                } else {
                    PlaneEnd::Real((a * x + b) / den)
                }
            }
        }
    }

    fn is_identity(&self) -> bool {
        let [a, b, c, d] = self.entries;
        let s = if a < 0.0 { -1.0 } else { 1.0 };
        (s * a - 1.0).abs() <= PLANE_TOL
            && (s * d - 1.0).abs() <= PLANE_TOL
            && b.abs() <= PLANE_TOL
            && c.abs() <= PLANE_TOL
    }

    /// Classification by `|trace|`, with the band `[2 - tol, 2 + tol]` treated as parabolic.
    pub fn classify(&self) -> IsometryClass {
        if self.is_identity() {
            return IsometryClass::Identity;
        }
        let t = self.trace().abs();
        if t > 2.0 + PLANE_TOL {
            IsometryClass::Hyperbolic
        } else if t >= 2.0 - PLANE_TOL {
            IsometryClass::Parabolic
        } else {
            IsometryClass::Elliptic
        }
    }

    /// Repelling and attracting fixed points with translation length
    /// `2 arcosh(|trace| / 2)`.
    pub fn axis(&self) -> Result<(PlaneEnd, PlaneEnd, f64)> {
        if self.classify() != IsometryClass::Hyperbolic {
            return invalid("axis requested for a non-hyperbolic isometry");
        }
        let [a, b, c, d] = self.entries;
        let length = 2.0 * (self.trace().abs() / 2.0).acosh();
        if c.abs() <= PLANE_TOL {
            // Fixes inf and b / (d - a); inf attracts when |a| > |d|.
            let finite = PlaneEnd::Real(b / (d - a));
            return Ok(if a.abs() > d.abs() {
                (finite, PlaneEnd::Infinity, length)
            } else {
                (PlaneEnd::Infinity, finite, length)
            });
        }
        // c x^2 + (d - a) x - b = 0.
        let disc = ((d - a) * (d - a) + 4.0 * b * c).sqrt();
        let r1 = (a - d + disc) / (2.0 * c);
        let r2 = (a - d - disc) / (2.0 * c);
        // Derivative at a fixed point x is 1 / (c x + d)^2; attracting when |c x + d| > 1.
        if (c * r1 + d).abs() > 1.0 {
            Ok((PlaneEnd::Real(r2), PlaneEnd::Real(r1), length))
        } else {
            Ok((PlaneEnd::Real(r1), PlaneEnd::Real(r2), length))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(re: f64, im: f64) -> PlanePoint {
        PlanePoint::new(re, im).unwrap()
    }

    #[test]
    fn distance_on_vertical_geodesic() {
        assert!((p(0.0, 1.0).dist(&p(0.0, 2.0)) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(p(0.3, 0.7).dist(&p(0.3, 0.7)), 0.0);
        assert!(PlanePoint::new(0.0, 0.0).is_err());
    }

    #[test]
    fn busemann_at_infinity_and_real_points() {
        assert!((PlaneEnd::Infinity.busemann(&p(0.0, 1.0), &p(0.0, 2.0)) - 2f64.ln()).abs() < 1e-15);
        // Rotating inf to 0 by z -> -1/z maps i -> i and 2i -> i/2.
        let b = PlaneEnd::Real(0.0).busemann(&p(0.0, 1.0), &p(0.0, 0.5));
        assert!((b - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn classification_examples() {
        assert_eq!(PlaneIsometry::diagonal(2.0).unwrap().classify(), IsometryClass::Hyperbolic);
        let par = PlaneIsometry::new(1.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(par.classify(), IsometryClass::Parabolic);
        let rot = PlaneIsometry::new(0.0, -1.0, 1.0, 0.0).unwrap();
        assert_eq!(rot.classify(), IsometryClass::Elliptic);
        let minus_id = PlaneIsometry::new(-1.0, 0.0, 0.0, -1.0).unwrap();
        assert_eq!(minus_id.classify(), IsometryClass::Identity);
        assert!(PlaneIsometry::new(1.0, 1.0, 1.0, 1.0).is_err());
        // Just inside the parabolic band.
        let near = PlaneIsometry::new(1.0 + 4e-10, 1.0, 0.0, 1.0 / (1.0 + 4e-10)).unwrap();
        assert_eq!(near.classify(), IsometryClass::Parabolic);
    }

    #[test]
    fn diagonal_axis() {
        let (minus, plus, len) = PlaneIsometry::diagonal(2.0).unwrap().axis().unwrap();
        assert!(minus.approx_eq(&PlaneEnd::Real(0.0)));
        assert_eq!(plus, PlaneEnd::Infinity);
        assert!((len - 2.0 * 2f64.ln()).abs() < 1e-12);
        assert!(PlaneIsometry::identity().axis().is_err());
    }

    #[test]
    fn axis_is_equivariant_and_fixed() {
        let h = PlaneIsometry::diagonal(1.7).unwrap();
        let g = PlaneIsometry::new(2.0, 1.0, 3.0, 2.0).unwrap();
        let conj = g.compose(&h).compose(&g.inverse());
        let (m0, p0, l0) = h.axis().unwrap();
        let (m1, p1, l1) = conj.axis().unwrap();
        assert!(g.apply_end(&m0).approx_eq(&m1));
        assert!(g.apply_end(&p0).approx_eq(&p1));
        assert!((l0 - l1).abs() < 1e-9);
        for e in [m1, p1] {
            assert!(conj.apply_end(&e).approx_eq(&e));
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn point() -> impl Strategy<Value = PlanePoint> {
            (-5.0f64..5.0, 0.05f64..5.0).prop_map(|(x, y)| p(x, y))
        }

        fn end() -> impl Strategy<Value = PlaneEnd> {
            prop_oneof![Just(PlaneEnd::Infinity), (-5.0f64..5.0).prop_map(PlaneEnd::Real)]
        }

        proptest! {
            #[test]
            fn triangle_inequality(a in point(), b in point(), c in point()) {
                prop_assert!(a.dist(&c) <= a.dist(&b) + b.dist(&c) + 1e-9);
                prop_assert!((a.dist(&b) - b.dist(&a)).abs() <= 1e-12);
            }

            #[test]
            fn busemann_cocycle_and_bound(xi in end(), x in point(), y in point(), z in point()) {
                let lhs = xi.busemann(&x, &z);
                let rhs = xi.busemann(&x, &y) + xi.busemann(&y, &z);
                prop_assert!((lhs - rhs).abs() <= 1e-9);
                prop_assert!(xi.busemann(&x, &y).abs() <= x.dist(&y) + 1e-9);
            }

            #[test]
            fn isometries_preserve_distance(a in point(), b in point(), t in -2.0f64..2.0, l in 0.3f64..3.0) {
                let g = PlaneIsometry::new(l, t * l, 0.0, 1.0 / l).unwrap()
                    .compose(&PlaneIsometry::new(0.0, -1.0, 1.0, t).unwrap());
                prop_assert!((g.apply(&a).dist(&g.apply(&b)) - a.dist(&b)).abs() <= 1e-9 * (1.0 + a.dist(&b)));
            }
        }
    }
}
