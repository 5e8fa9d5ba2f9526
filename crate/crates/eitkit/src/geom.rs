//! Planar geometry primitives shared by the mesh and phantom modules.

use serde::{Deserialize, Serialize};

/// A point in the tank plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn dist(&self, other: &Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Angle from the positive x axis, wrapped to [0, 2*pi).
    pub fn angle(&self) -> f64 {
        let a = self.y.atan2(self.x);
        if a < 0.0 {
            a + std::f64::consts::TAU
        } else {
            a
        }
    }
}

/// Twice the signed area of triangle (a, b, c); positive when counterclockwise.
pub fn orient2d(a: Point2, b: Point2, c: Point2) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

/// Signed area of triangle (a, b, c).
pub fn triangle_area(a: Point2, b: Point2, c: Point2) -> f64 {
    0.5 * orient2d(a, b, c)
}

/// Positive when `p` lies strictly inside the circumcircle of the
/// counterclockwise triangle (a, b, c).
pub fn in_circumcircle(a: Point2, b: Point2, c: Point2, p: Point2) -> f64 {
    let adx = a.x - p.x;
    let ady = a.y - p.y;
    let bdx = b.x - p.x;
    let bdy = b.y - p.y;
    let cdx = c.x - p.x;
    let cdy = c.y - p.y;
    let ad = adx * adx + ady * ady;
    let bd = bdx * bdx + bdy * bdy;
    let cd = cdx * cdx + cdy * cdy;
    adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx)
}

/// Circumradius of triangle (a, b, c).
pub fn circumradius(a: Point2, b: Point2, c: Point2) -> f64 {
    let la = b.dist(&c);
    let lb = a.dist(&c);
    let lc = a.dist(&b);
    let area = triangle_area(a, b, c).abs();
    if area < f64::MIN_POSITIVE {
        return f64::INFINITY;
    }
    la * lb * lc / (4.0 * area)
}

/// SplitMix64 step, used to derive independent sub-seeds.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic hash of an index to a float in [0, 1).
pub fn hash01(key: u64) -> f64 {
    (splitmix64(key) >> 11) as f64 / (1u64 << 53) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orientation_signs() {
        let a = Point2::new(0.0, 0.0);
        let b = Point2::new(1.0, 0.0);
        let c = Point2::new(0.0, 1.0);
        assert!(orient2d(a, b, c) > 0.0);
        assert!(orient2d(a, c, b) < 0.0);
    }

    #[test]
    fn circumcircle_of_unit_right_triangle() {
        let a = Point2::new(0.0, 0.0);
        let b = Point2::new(1.0, 0.0);
        let c = Point2::new(0.0, 1.0);
        // circumcenter (0.5, 0.5), radius sqrt(0.5)
        assert!(in_circumcircle(a, b, c, Point2::new(0.5, 0.5)) > 0.0);
        assert!(in_circumcircle(a, b, c, Point2::new(2.0, 2.0)) < 0.0);
        assert!((circumradius(a, b, c) - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn angle_wraps_to_positive() {
        let p = Point2::new(0.0, -1.0);
        assert!((p.angle() - 3.0 * std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }
}
