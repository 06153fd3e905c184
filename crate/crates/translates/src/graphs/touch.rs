//! Points at prescribed norm distance from two centres, found by
//! intersecting the two boundary polylines.

use serde::{Deserialize, Serialize};

use super::GraphError;
use crate::geometry::hull::{segment_intersection, SegmentHit};
use crate::geometry::{SymmetricBody, Vec2};

/// Dedup radius, in units of `τ·scale`.
const CLUSTER_FACTOR: f64 = 10.0;

/// The two points at equal norm distance from a pair of centres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TouchPoints {
    /// Solution on the left of the directed line from the first centre to
    /// the second.
    pub left: Vec2,
    pub right: Vec2,
    /// Largest Euclidean spread among raw hits merged into one solution.
    pub cluster_diameter: f64,
}

/// The two points `v` with `‖v − v1‖ = ‖v − v2‖ = 2`, for touching `v1`, `v2`.
pub fn third_points(body: &SymmetricBody, v1: Vec2, v2: Vec2) -> Result<TouchPoints, GraphError> {
    let d = v2 - v1;
    let n = body.norm(d);
    if (n - 2.0).abs() > body.tol_at(d) {
        return Err(GraphError::NotTouching(n));
    }
    two_center_points(body, v1, v2, 2.0)
}

/// The two points `z` with `‖z − a‖ = ‖z − b‖ = radius`; requires
/// `0 < ‖a − b‖ < 2·radius`.
pub fn two_center_points(body: &SymmetricBody, a: Vec2, b: Vec2, radius: f64) -> Result<TouchPoints, GraphError> {
    let d = b - a;
    let n = body.norm(d);
    if !(n > 0.0 && n < 2.0 * radius) {
        return Err(GraphError::NotTouching(n));
    }
    let eps = cluster_eps(body, a, b, radius);
    let (hits, overlap) = boundary_hits(body, a, b, radius, eps);
    if overlap > eps {
        return Err(GraphError::ManySolutions { clusters: 0, overlap });
    }
    let clusters = cluster(&hits, eps);
    if clusters.len() != 2 {
        return Err(GraphError::ManySolutions {
            clusters: clusters.len(),
            overlap: 0.0,
        });
    }
    let mut reps = [Vec2::ZERO; 2];
    let mut diameter: f64 = 0.0;
    for (r, c) in reps.iter_mut().zip(&clusters) {
        // Keep the raw hit that best satisfies both distance equations.
        let err = |z: Vec2| (body.norm(z - a) - radius).abs().max((body.norm(z - b) - radius).abs());
        *r = c.iter().copied().min_by(|x, y| err(*x).total_cmp(&err(*y))).unwrap();
        for (s, &x) in c.iter().enumerate() {
            for &y in &c[s + 1..] {
                diameter = diameter.max(x.dist(y));
            }
        }
    }
    let (left, right) = if d.cross(reps[0] - a) > 0.0 {
        (reps[0], reps[1])
    } else {
        (reps[1], reps[0])
    };
    Ok(TouchPoints {
        left,
        right,
        cluster_diameter: diameter,
    })
}

fn cluster_eps(body: &SymmetricBody, a: Vec2, b: Vec2, radius: f64) -> f64 {
    let scale = (radius * body.circumradius()).max(a.len()).max(b.len()).max(1.0);
    CLUSTER_FACTOR * body.tolerance() * scale
}

/// Raw intersection points of the boundaries of `a + radius·A` and
/// `b + radius·A`, plus the length of the longest shared segment. Shared
/// segments contribute both endpoints.
fn boundary_hits(body: &SymmetricBody, a: Vec2, b: Vec2, radius: f64, eps: f64) -> (Vec<Vec2>, f64) {
    let p: Vec<Vec2> = body.vertices().iter().map(|&v| a + v * radius).collect();
    let q: Vec<Vec2> = body.vertices().iter().map(|&v| b + v * radius).collect();
    let m = p.len();
    let qbox: Vec<(Vec2, Vec2)> = (0..m).map(|j| bbox(q[j], q[(j + 1) % m], eps)).collect();
    let mut hits = Vec::new();
    let mut overlap: f64 = 0.0;
    for i in 0..m {
        let (p0, p1) = (p[i], p[(i + 1) % m]);
        let pb = bbox(p0, p1, eps);
        for j in 0..m {
            if !boxes_meet(pb, qbox[j]) {
                continue;
            }
            match segment_intersection(p0, p1, q[j], q[(j + 1) % m], eps) {
                SegmentHit::None => {}
                SegmentHit::Point(x) => hits.push(x),
                SegmentHit::Overlap(x, y) => {
                    overlap = overlap.max(x.dist(y));
                    hits.push(x);
                    hits.push(y);
                }
            }
        }
    }
    (hits, overlap)
}

/// A point `z` with `‖z − a‖ = ‖z − b‖ = radius` and `dir × (z − a) > 0`.
///
/// Unlike [`two_center_points`] the solution on that side may be a whole
/// segment, in which case the centroid of its extreme points is returned.
pub fn junction_point(body: &SymmetricBody, a: Vec2, b: Vec2, radius: f64, dir: Vec2) -> Result<Vec2, GraphError> {
    let n = body.norm(b - a);
    if !(n > 0.0 && n < 2.0 * radius) {
        return Err(GraphError::NotTouching(n));
    }
    let eps = cluster_eps(body, a, b, radius);
    let (hits, _) = boundary_hits(body, a, b, radius, eps);
    let side: Vec<Vec2> = hits.into_iter().filter(|&z| dir.cross(z - a) > eps).collect();
    if side.is_empty() {
        return Err(GraphError::ManySolutions { clusters: 0, overlap: 0.0 });
    }
    let mut far = (side[0], side[0]);
    let mut best = 0.0;
    for (i, &x) in side.iter().enumerate() {
        for &y in &side[i..] {
            if x.dist(y) > best {
                best = x.dist(y);
                far = (x, y);
            }
        }
    }
    Ok((far.0 + far.1) * 0.5)
}

fn bbox(a: Vec2, b: Vec2, eps: f64) -> (Vec2, Vec2) {
    (
        Vec2::new(a.x.min(b.x) - eps, a.y.min(b.y) - eps),
        Vec2::new(a.x.max(b.x) + eps, a.y.max(b.y) + eps),
    )
}

fn boxes_meet(a: (Vec2, Vec2), b: (Vec2, Vec2)) -> bool {
    a.0.x <= b.1.x && b.0.x <= a.1.x && a.0.y <= b.1.y && b.0.y <= a.1.y
}

/// Single-linkage clustering at distance `eps`.
fn cluster(hits: &[Vec2], eps: f64) -> Vec<Vec<Vec2>> {
    let mut out: Vec<Vec<Vec2>> = Vec::new();
    let mut pending: Vec<Vec2> = hits.to_vec();
    while let Some(seed) = pending.pop() {
        let mut c = vec![seed];
        let mut grown = true;
        while grown {
            grown = false;
            let mut k = 0;
            while k < pending.len() {
                if c.iter().any(|x| x.dist(pending[k]) <= eps) {
                    c.push(pending.swap_remove(k));
                    grown = true;
                } else {
                    k += 1;
                }
            }
        }
        out.push(c);
    }
    out
}
