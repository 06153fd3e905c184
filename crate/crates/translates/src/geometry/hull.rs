//! Planar polygon helpers: convex hull, area, point location, segment
//! intersection and winding.

use super::Vec2;

/// Convex hull by Andrew's monotone chain, counter-clockwise, with
/// collinear and duplicate points dropped. `eps` is a relative tolerance on
/// the orientation test.
pub fn convex_hull(points: &[Vec2], eps: f64) -> Vec<Vec2> {
    let mut pts: Vec<Vec2> = points.iter().copied().filter(|p| p.is_finite()).collect();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let scale = pts
        .iter()
        .map(|p| p.x.abs().max(p.y.abs()))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let thresh = eps * scale * scale;
    let turn = |o: Vec2, a: Vec2, b: Vec2| (a - o).cross(b - o);

    let mut lower: Vec<Vec2> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2 && turn(lower[lower.len() - 2], lower[lower.len() - 1], p) <= thresh {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Vec2> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && turn(upper[upper.len() - 2], upper[upper.len() - 1], p) <= thresh {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Signed area (positive for counter-clockwise order).
pub fn signed_area(poly: &[Vec2]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let mut s = 0.0;
    for i in 0..n {
        s += poly[i].cross(poly[(i + 1) % n]);
    }
    0.5 * s
}

/// Minkowski sum of two convex polygons, as the hull of all vertex sums.
pub fn minkowski_sum(a: &[Vec2], b: &[Vec2]) -> Vec<Vec2> {
    let mut pts = Vec::with_capacity(a.len() * b.len());
    for &p in a {
        for &q in b {
            pts.push(p + q);
        }
    }
    convex_hull(&pts, 1e-14)
}

/// Winding number of the closed polyline `poly` around `p`, counting signed
/// crossings of the upward ray. Points on the polyline give an arbitrary
/// but finite answer; callers that care test [`on_polyline`] first.
pub fn winding_number(poly: &[Vec2], p: Vec2) -> i64 {
    let n = poly.len();
    let mut w = 0i64;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        if a.y <= p.y {
            if b.y > p.y && (b - a).cross(p - a) > 0.0 {
                w += 1;
            }
        } else if b.y <= p.y && (b - a).cross(p - a) < 0.0 {
            w -= 1;
        }
    }
    w
}

/// True when `p` lies strictly inside the closed polyline (non-zero winding
/// and not within `eps` of any of its segments).
pub fn strictly_inside(poly: &[Vec2], p: Vec2, eps: f64) -> bool {
    !on_polyline(poly, p, eps) && winding_number(poly, p) != 0
}

/// Whether `p` is within Euclidean distance `eps` of the closed polyline.
pub fn on_polyline(poly: &[Vec2], p: Vec2, eps: f64) -> bool {
    let n = poly.len();
    (0..n).any(|i| point_segment_distance(p, poly[i], poly[(i + 1) % n]) <= eps)
}

pub fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let d = b - a;
    let l2 = d.len_sq();
    if l2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(d) / l2).clamp(0.0, 1.0);
    p.dist(a + d * t)
}

/// Result of intersecting two closed segments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentHit {
    None,
    Point(Vec2),
    /// Collinear overlap from one point to another.
    Overlap(Vec2, Vec2),
}

/// Intersection of segments `[p, p2]` and `[q, q2]`. `eps` is an absolute
/// length tolerance for endpoint slack and collinearity.
pub fn segment_intersection(p: Vec2, p2: Vec2, q: Vec2, q2: Vec2, eps: f64) -> SegmentHit {
    let r = p2 - p;
    let s = q2 - q;
    let rl = r.len();
    let sl = s.len();
    if rl == 0.0 || sl == 0.0 {
        return SegmentHit::None;
    }
    let denom = r.cross(s);
    let qp = q - p;
    if (denom / (rl * sl)).abs() < 1e-12 {
        // Parallel: collinear only if q is on the line through p.
        if (qp.cross(r) / rl).abs() > eps {
            return SegmentHit::None;
        }
        let t0 = qp.dot(r) / (rl * rl);
        let t1 = (q2 - p).dot(r) / (rl * rl);
        let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
        let slack = eps / rl;
        let a = lo.max(0.0);
        let b = hi.min(1.0);
        if a > b + slack {
            return SegmentHit::None;
        }
        let pa = p + r * a.min(b);
        let pb = p + r * b.max(a);
        if pa.dist(pb) <= eps {
            return SegmentHit::Point((pa + pb) * 0.5);
        }
        return SegmentHit::Overlap(pa, pb);
    }
    let t = qp.cross(s) / denom;
    let u = qp.cross(r) / denom;
    let ts = eps / rl;
    let us = eps / sl;
    if t < -ts || t > 1.0 + ts || u < -us || u > 1.0 + us {
        return SegmentHit::None;
    }
    SegmentHit::Point(p + r * t.clamp(0.0, 1.0))
}

/// Parameter interval `[t_in, t_out]` of the line `origin + t·dir` inside
/// the closed convex counter-clockwise polygon `poly`, if non-empty.
pub fn line_interval(poly: &[Vec2], origin: Vec2, dir: Vec2) -> Option<(f64, f64)> {
    let n = poly.len();
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for i in 0..n {
        let a = poly[i];
        let e = poly[(i + 1) % n] - a;
        // Inside means e × (x − a) ≥ 0, i.e. c0 + t·c1 ≥ 0.
        let c0 = e.cross(origin - a);
        let c1 = e.cross(dir);
        if c1 == 0.0 {
            if c0 < 0.0 {
                return None;
            }
        } else if c1 > 0.0 {
            lo = lo.max(-c0 / c1);
        } else {
            hi = hi.min(-c0 / c1);
        }
    }
    (lo <= hi).then_some((lo, hi))
}

/// Total signed change of argument (radians) of the closed polyline around
/// `center`, following each segment along the shorter turn.
pub fn argument_variation(poly: &[Vec2], center: Vec2) -> f64 {
    let n = poly.len();
    let mut total = 0.0;
    for i in 0..n {
        let a = poly[i] - center;
        let b = poly[(i + 1) % n] - center;
        total += a.cross(b).atan2(a.dot(b));
    }
    total
}
