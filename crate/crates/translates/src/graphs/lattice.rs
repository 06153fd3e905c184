use serde::{Deserialize, Serialize};

use super::{third_points, GraphError, PointSet};
use crate::geometry::{SymmetricBody, Vec2};

/// Coefficient steps between adjacent lattice points.
pub const NEIGHBOR_STEPS: [(i64, i64); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];

/// Integer coefficients of `a1·e1 + a2·e2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeCoord {
    pub a1: i64,
    pub a2: i64,
}

impl LatticeCoord {
    pub const fn new(a1: i64, a2: i64) -> Self {
        LatticeCoord { a1, a2 }
    }
}

/// The lattice spanned by `e1`, `e2` with `‖e1‖ = ‖e2‖ = ‖e1 − e2‖ = 2`.
///
/// The body is not stored; [`Lattice::new`] checks the basis against it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    pub e1: Vec2,
    pub e2: Vec2,
}

impl Lattice {
    pub fn new(body: &SymmetricBody, e1: Vec2, e2: Vec2) -> Result<Self, GraphError> {
        for (name, v) in [("e1", e1), ("e2", e2), ("e1-e2", e1 - e2)] {
            let n = body.norm(v);
            if (n - 2.0).abs() > body.tol_at(v) {
                return Err(GraphError::InvalidLattice(format!("‖{name}‖ = {n}, expected 2")));
            }
        }
        if e1.cross(e2) <= 0.0 {
            return Err(GraphError::InvalidLattice("basis is not counter-clockwise".into()));
        }
        Ok(Lattice { e1, e2 })
    }

    pub fn point(&self, c: LatticeCoord) -> Vec2 {
        self.e1 * c.a1 as f64 + self.e2 * c.a2 as f64
    }

    /// The six touching neighbours of the origin, counter-clockwise from `e1`.
    pub fn neighbors(&self) -> [Vec2; 6] {
        NEIGHBOR_STEPS.map(|(a, b)| self.point(LatticeCoord::new(a, b)))
    }

    pub fn points(&self, coords: &[LatticeCoord]) -> PointSet {
        PointSet::new(coords.iter().map(|&c| self.point(c)).collect())
    }
}

/// `e1 = 2·radial_vector(θ)` and `e2` the left third point of `0, e1`.
pub fn lattice_from(body: &SymmetricBody, theta: f64) -> Result<Lattice, GraphError> {
    let e1 = body.radial_vector(theta) * 2.0;
    let t = third_points(body, Vec2::ZERO, e1)?;
    Lattice::new(body, e1, t.left)
}

/// Graph distance from the origin in the full lattice contact graph.
pub fn lattice_distance(c: LatticeCoord) -> u64 {
    c.a1.unsigned_abs().max(c.a2.unsigned_abs()).max((c.a1 + c.a2).unsigned_abs())
}

/// Coordinates at distance exactly `r`, counter-clockwise from `(r, 0)`.
pub fn ring_coords(r: i64) -> Vec<LatticeCoord> {
    if r == 0 {
        return vec![LatticeCoord::new(0, 0)];
    }
    let dirs = [(-1, 1), (-1, 0), (0, -1), (1, -1), (1, 0), (0, 1)];
    let mut out = Vec::with_capacity(6 * r as usize);
    let (mut a, mut b) = (r, 0);
    for (da, db) in dirs {
        for _ in 0..r {
            out.push(LatticeCoord::new(a, b));
            a += da;
            b += db;
        }
    }
    out
}

/// Lattice points at distance `k` or `k + 1` from the origin, inner ring first.
pub fn lattice_ring(lat: &Lattice, k: i64) -> (PointSet, Vec<LatticeCoord>) {
    let mut coords = ring_coords(k);
    coords.extend(ring_coords(k + 1));
    (lat.points(&coords), coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{HashMap, VecDeque};

    fn bfs_oracle(radius: i64) -> HashMap<LatticeCoord, u64> {
        let mut dist = HashMap::new();
        let mut q = VecDeque::new();
        dist.insert(LatticeCoord::new(0, 0), 0);
        q.push_back(LatticeCoord::new(0, 0));
        while let Some(c) = q.pop_front() {
            let d = dist[&c];
            for (a, b) in NEIGHBOR_STEPS {
                let nc = LatticeCoord::new(c.a1 + a, c.a2 + b);
                if nc.a1.abs() > radius || nc.a2.abs() > radius || dist.contains_key(&nc) {
                    continue;
                }
                dist.insert(nc, d + 1);
                q.push_back(nc);
            }
        }
        dist
    }

    #[test]
    fn distance_examples() {
        assert_eq!(lattice_distance(LatticeCoord::new(3, 0)), 3);
        assert_eq!(lattice_distance(LatticeCoord::new(2, -2)), 2);
        assert_eq!(lattice_distance(LatticeCoord::new(2, 1)), 3);
    }

    #[test]
    fn distance_matches_bfs() {
        // A box of radius 30 leaves the radius-10 ball's shortest paths intact.
        let dist = bfs_oracle(30);
        for a1 in -10..=10 {
            for a2 in -10..=10 {
                let c = LatticeCoord::new(a1, a2);
                assert_eq!(lattice_distance(c), dist[&c], "{c:?}");
            }
        }
    }

    #[test]
    fn rings_have_oracle_sizes() {
        let lat = lattice_from(&SymmetricBody::hexagon(), 0.0).unwrap();
        let dist = bfs_oracle(20);
        for k in 1..8 {
            let (pts, coords) = lattice_ring(&lat, k);
            let expected = dist.values().filter(|&&d| d == k as u64 || d == k as u64 + 1).count();
            assert_eq!(pts.len(), expected);
            assert_eq!(pts.len(), 12 * k as usize + 6);
            let mut sorted = coords.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), coords.len());
        }
    }

    #[test]
    fn ring_is_counter_clockwise() {
        let lat = lattice_from(&SymmetricBody::disk(256).unwrap(), 0.0).unwrap();
        let pts = lat.points(&ring_coords(4));
        let area = crate::geometry::hull::signed_area(&pts.points);
        assert!(area > 0.0);
    }

    #[test]
    fn disk_and_hex_lattices() {
        let s3 = 3f64.sqrt();
        for (body, tol) in [(SymmetricBody::disk(256).unwrap(), 1e-3), (SymmetricBody::hexagon(), 1e-12)] {
            let lat = lattice_from(&body, 0.0).unwrap();
            assert!(lat.e1.dist(Vec2::new(2.0, 0.0)) < 1e-15);
            assert!(lat.e2.dist(Vec2::new(1.0, s3)) < tol);
        }
    }

    #[test]
    fn other_third_point_gives_same_lattice() {
        let body = SymmetricBody::disk(256).unwrap();
        let lat = lattice_from(&body, 0.3).unwrap();
        let right = third_points(&body, Vec2::ZERO, lat.e1).unwrap().right;
        assert!(right.dist(lat.e1 - lat.e2) < 1e-12);
    }

    #[test]
    fn ring_points_are_far_from_origin() {
        let lat = lattice_from(&SymmetricBody::disk(256).unwrap(), 0.0).unwrap();
        let body = SymmetricBody::disk(256).unwrap();
        for k in 1..6 {
            for p in lattice_ring(&lat, k).0.points {
                assert!(body.norm(p) >= 3f64.sqrt() / 2.0 * k as f64);
            }
        }
    }

    #[test]
    fn lattice_edge_law() {
        for body in [
            SymmetricBody::disk(256).unwrap(),
            SymmetricBody::hexagon(),
            SymmetricBody::regular(5).unwrap(),
            SymmetricBody::ellipse(1.0, 0.6, 128).unwrap(),
        ] {
            let lat = lattice_from(&body, 0.4).unwrap();
            for a1 in -6i64..=6 {
                for a2 in -6i64..=6 {
                    if (a1, a2) == (0, 0) {
                        continue;
                    }
                    let v = lat.point(LatticeCoord::new(a1, a2));
                    let n = body.norm(v);
                    let tol = 1e-9 * v.len().max(1.0);
                    assert!(n >= 2.0 - tol, "{a1},{a2}: {n}");
                    let step = NEIGHBOR_STEPS.contains(&(a1, a2));
                    assert_eq!((n - 2.0).abs() <= tol, step, "{a1},{a2}: {n}");
                }
            }
        }
    }
}
