use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

/// A point or vector in the plane. Serializes as `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    /// Unit vector of argument `theta`.
    #[inline]
    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Vec2::new(c, s)
    }

    #[inline]
    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3-D cross product.
    #[inline]
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    /// Euclidean length.
    #[inline]
    pub fn len(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn len_sq(self) -> f64 {
        self.dot(self)
    }

    /// Argument in `[0, 2π)`.
    #[inline]
    pub fn angle(self) -> f64 {
        normalize_angle(self.y.atan2(self.x))
    }

    /// Counter-clockwise quarter turn.
    #[inline]
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn dist(self, o: Vec2) -> f64 {
        (self - o).len()
    }

    #[inline]
    pub fn lerp(self, o: Vec2, t: f64) -> Vec2 {
        self + (o - self) * t
    }
}

/// Maps any finite angle into `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let r = theta.rem_euclid(tau);
    if r >= tau {
        0.0
    } else {
        r
    }
}

impl From<[f64; 2]> for Vec2 {
    fn from(a: [f64; 2]) -> Self {
        Vec2::new(a[0], a[1])
    }
}

impl From<Vec2> for [f64; 2] {
    fn from(v: Vec2) -> Self {
        [v.x, v.y]
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl SubAssign for Vec2 {
    #[inline]
    fn sub_assign(&mut self, o: Vec2) {
        self.x -= o.x;
        self.y -= o.y;
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    #[inline]
    fn mul(self, v: Vec2) -> Vec2 {
        v * self
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn div(self, s: f64) -> Vec2 {
        Vec2::new(self.x / s, self.y / s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_and_perp_agree() {
        let a = Vec2::new(2.0, 1.0);
        let b = Vec2::new(-1.0, 3.0);
        assert_eq!(a.cross(b), a.perp().dot(b));
        assert_eq!(a.cross(a), 0.0);
    }

    #[test]
    fn angle_is_in_range() {
        assert_eq!(Vec2::new(1.0, 0.0).angle(), 0.0);
        let a = Vec2::new(0.0, -1.0).angle();
        assert!((a - 1.5 * std::f64::consts::PI).abs() < 1e-15);
        assert_eq!(normalize_angle(-1e-300), 0.0);
    }

    #[test]
    fn serializes_as_pair() {
        let v = Vec2::new(1.5, -2.0);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, "[1.5,-2.0]");
        let back: Vec2 = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }
}
