use std::ops::Mul;

use serde::{Deserialize, Serialize};

use super::Vec2;

/// A 2×2 real matrix acting on column vectors. Serializes row-major as
/// `[[a11, a12], [a21, a22]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[[f64; 2]; 2]", into = "[[f64; 2]; 2]")]
pub struct LinearMap2 {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
}

impl LinearMap2 {
    pub const IDENTITY: LinearMap2 = LinearMap2::new(1.0, 0.0, 0.0, 1.0);

    pub const fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        LinearMap2 { a11, a12, a21, a22 }
    }

    pub const fn diag(a: f64, b: f64) -> Self {
        LinearMap2::new(a, 0.0, 0.0, b)
    }

    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        LinearMap2::new(c, -s, s, c)
    }

    /// The map whose columns are `c1` and `c2`.
    pub fn from_columns(c1: Vec2, c2: Vec2) -> Self {
        LinearMap2::new(c1.x, c2.x, c1.y, c2.y)
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        LinearMap2::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.a11, self.a12, self.a21, self.a22]
    }

    pub fn det(self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn apply(self, v: Vec2) -> Vec2 {
        Vec2::new(
            self.a11 * v.x + self.a12 * v.y,
            self.a21 * v.x + self.a22 * v.y,
        )
    }

    /// Inverse, or `None` when `|det| <= eps`.
    pub fn inverse_checked(self, eps: f64) -> Option<Self> {
        let d = self.det();
        if !d.is_finite() || d.abs() <= eps {
            return None;
        }
        Some(LinearMap2::new(
            self.a22 / d,
            -self.a12 / d,
            -self.a21 / d,
            self.a11 / d,
        ))
    }

    pub fn inverse(self) -> Option<Self> {
        self.inverse_checked(0.0)
    }

    /// Largest absolute entry difference.
    pub fn max_abs_diff(self, o: LinearMap2) -> f64 {
        self.to_array()
            .iter()
            .zip(o.to_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(self) -> bool {
        self.to_array().iter().all(|a| a.is_finite())
    }
}

impl Default for LinearMap2 {
    fn default() -> Self {
        LinearMap2::IDENTITY
    }
}

impl Mul for LinearMap2 {
    type Output = LinearMap2;
    fn mul(self, o: LinearMap2) -> LinearMap2 {
        LinearMap2::new(
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )
    }
}

impl Mul<Vec2> for LinearMap2 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        self.apply(v)
    }
}

impl From<[[f64; 2]; 2]> for LinearMap2 {
    fn from(m: [[f64; 2]; 2]) -> Self {
        LinearMap2::new(m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

impl From<LinearMap2> for [[f64; 2]; 2] {
    fn from(m: LinearMap2) -> Self {
        [[m.a11, m.a12], [m.a21, m.a22]]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trips() {
        let m = LinearMap2::new(2.0, 1.0, -0.5, 3.0);
        let inv = m.inverse().unwrap();
        assert!((m * inv).max_abs_diff(LinearMap2::IDENTITY) < 1e-15);
        let v = Vec2::new(0.3, -1.7);
        let w = inv.apply(m.apply(v));
        assert!((w - v).len() < 1e-15);
    }

    #[test]
    fn singular_has_no_inverse() {
        assert!(LinearMap2::new(1.0, 2.0, 2.0, 4.0).inverse().is_none());
        assert!(LinearMap2::diag(1e-7, 1.0).inverse_checked(1e-6).is_none());
    }

    #[test]
    fn columns_are_images_of_basis() {
        let m = LinearMap2::from_columns(Vec2::new(1.0, 2.0), Vec2::new(3.0, 4.0));
        assert_eq!(m.apply(Vec2::new(1.0, 0.0)), Vec2::new(1.0, 2.0));
        assert_eq!(m.apply(Vec2::new(0.0, 1.0)), Vec2::new(3.0, 4.0));
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, "[[1.0,3.0],[2.0,4.0]]");
    }
}
