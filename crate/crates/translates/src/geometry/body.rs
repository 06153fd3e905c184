use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::hull::{convex_hull, signed_area};
use super::{GeometryError, LinearMap2, Vec2};

/// Default point and norm equality tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Determinant below which a map counts as singular when transforming bodies.
pub const SINGULAR_DET: f64 = 1e-12;

/// Vertex angles closer than this to the query return the vertex itself.
const VERTEX_ANGLE_SNAP: f64 = 1e-12;

/// An origin-symmetric convex polygon, stored counter-clockwise with
/// `vertices[i + m] == -vertices[i]` exactly (`2m` vertices). The first
/// vertex is the one of smallest argument in `[0, 2π)`.
///
/// The body's unit ball is the polygon itself, so
/// [`minkowski_functional`](Self::minkowski_functional) is the norm whose
/// unit circle is the boundary.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "BodyRepr", into = "BodyRepr")]
pub struct SymmetricBody {
    vertices: Vec<Vec2>,
    tolerance: f64,
    angles: Vec<f64>,
    /// `gauge[i] · x` is the norm of `x` on the cone spanned by edge `i`.
    gauge: Vec<Vec2>,
}

#[derive(Serialize, Deserialize)]
struct BodyRepr {
    vertices: Vec<Vec2>,
    tolerance: f64,
}

impl TryFrom<BodyRepr> for SymmetricBody {
    type Error = GeometryError;
    fn try_from(r: BodyRepr) -> Result<Self, Self::Error> {
        SymmetricBody::new(r.vertices, r.tolerance)
    }
}

impl From<SymmetricBody> for BodyRepr {
    fn from(b: SymmetricBody) -> Self {
        BodyRepr {
            vertices: b.vertices,
            tolerance: b.tolerance,
        }
    }
}

impl PartialEq for SymmetricBody {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.tolerance == other.tolerance
    }
}

/// How a translate `A + v` sits relative to `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Disjoint,
    Touch,
    Overlap,
}

/// Outcome of the unique-regular-triangle test: every boundary edge must have
/// norm-length at most `1 + tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UrtcReport {
    pub holds: bool,
    /// Largest norm-length over all boundary edges.
    pub max_edge_norm: f64,
    /// The first edge exceeding the bound, as `(from, to)`.
    pub violating_edge: Option<(Vec2, Vec2)>,
}

impl SymmetricBody {
    /// Validates and canonicalizes a counter-clockwise, centrally symmetric,
    /// strictly convex polygon. Symmetry is checked to `tolerance` and then
    /// enforced exactly.
    pub fn new(vertices: Vec<Vec2>, tolerance: f64) -> Result<Self, GeometryError> {
        if !(tolerance.is_finite() && tolerance > 0.0) {
            return Err(GeometryError::InvalidBody(format!(
                "tolerance must be positive, got {tolerance}"
            )));
        }
        let n = vertices.len();
        if n < 4 {
            return Err(GeometryError::InvalidBody(format!(
                "need at least 4 vertices, got {n}"
            )));
        }
        if !n.is_multiple_of(2) {
            return Err(GeometryError::InvalidBody(format!(
                "vertex count must be even, got {n}"
            )));
        }
        if let Some(p) = vertices.iter().find(|v| !v.is_finite()) {
            return Err(GeometryError::InvalidBody(format!("non-finite vertex {p:?}")));
        }
        let m = n / 2;
        for i in 0..m {
            let (a, b) = (vertices[i], vertices[i + m]);
            if (a + b).len() > tolerance * a.len().max(1.0) {
                return Err(GeometryError::InvalidBody(format!(
                    "not centrally symmetric: vertex {i} {a:?} vs vertex {} {b:?}",
                    i + m
                )));
            }
        }
        if signed_area(&vertices) <= 0.0 {
            return Err(GeometryError::InvalidBody(
                "vertices must be in counter-clockwise order".into(),
            ));
        }
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            if (b - a).cross(c - b) <= 0.0 {
                return Err(GeometryError::InvalidBody(format!(
                    "not strictly convex at vertex {}",
                    (i + 1) % n
                )));
            }
        }
        // Exact symmetry, then rotate so the smallest argument comes first.
        let mut half: Vec<Vec2> = vertices[..m].to_vec();
        half.extend(vertices[..m].iter().map(|&v| -v));
        let start = (0..n)
            .min_by(|&i, &j| half[i].angle().total_cmp(&half[j].angle()))
            .unwrap_or(0);
        half.rotate_left(start);
        let angles: Vec<f64> = half.iter().map(|v| v.angle()).collect();
        if angles.windows(2).any(|w| w[1] <= w[0]) {
            return Err(GeometryError::InvalidBody(
                "origin is not strictly interior".into(),
            ));
        }
        let gauge = (0..n)
            .map(|i| {
                let a = half[i];
                let b = half[(i + 1) % n];
                let normal = Vec2::new(b.y - a.y, a.x - b.x);
                normal / normal.dot(a)
            })
            .collect();
        Ok(SymmetricBody {
            vertices: half,
            tolerance,
            angles,
            gauge,
        })
    }

    /// Symmetric hull of `points` and their negations.
    pub fn from_symmetric_points(points: &[Vec2], tolerance: f64) -> Result<Self, GeometryError> {
        let mut all: Vec<Vec2> = points.to_vec();
        all.extend(points.iter().map(|&p| -p));
        let hull = convex_hull(&all, 1e-13);
        if hull.len() < 4 || signed_area(&hull) <= 0.0 {
            return Err(GeometryError::DegenerateBody);
        }
        SymmetricBody::new(hull, tolerance)
    }

    /// The square `[-1, 1]²`.
    pub fn square() -> Self {
        SymmetricBody::new(
            vec![
                Vec2::new(1.0, 1.0),
                Vec2::new(-1.0, 1.0),
                Vec2::new(-1.0, -1.0),
                Vec2::new(1.0, -1.0),
            ],
            DEFAULT_TOLERANCE,
        )
        .expect("square is valid")
    }

    /// Regular hexagon of circumradius 1 with a vertex at `(1, 0)`.
    pub fn hexagon() -> Self {
        regular_polygon_points(6)
            .and_then(|v| SymmetricBody::new(v, DEFAULT_TOLERANCE))
            .expect("hexagon is valid")
    }

    /// Inscribed regular `segments`-gon approximating the unit disk.
    pub fn disk(segments: usize) -> Result<Self, GeometryError> {
        check_segments(segments)?;
        SymmetricBody::new(regular_polygon_points(segments)?, DEFAULT_TOLERANCE)
    }

    /// Regular `n`-gon inscribed in the unit circle with a vertex at angle 0.
    /// Odd `n` is not centrally symmetric and is replaced by its halved
    /// difference body, which has the same signature.
    pub fn regular(n: usize) -> Result<Self, GeometryError> {
        if n < 3 {
            return Err(GeometryError::InvalidBody(format!(
                "regular polygon needs n >= 3, got {n}"
            )));
        }
        let pts = regular_polygon_points(n)?;
        if n.is_multiple_of(2) {
            SymmetricBody::new(pts, DEFAULT_TOLERANCE)
        } else {
            symmetrize(&pts, DEFAULT_TOLERANCE)
        }
    }

    /// Inscribed polygon of the ellipse with semi-axes `a` and `b`.
    pub fn ellipse(a: f64, b: f64, segments: usize) -> Result<Self, GeometryError> {
        check_segments(segments)?;
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(GeometryError::InvalidBody(format!(
                "ellipse semi-axes must be positive, got ({a}, {b})"
            )));
        }
        let pts = (0..segments)
            .map(|i| {
                let t = TAU * i as f64 / segments as f64;
                Vec2::new(a * t.cos(), b * t.sin())
            })
            .collect();
        SymmetricBody::new(pts, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self, GeometryError> {
        if !(tolerance.is_finite() && tolerance > 0.0) {
            return Err(GeometryError::InvalidBody(format!(
                "tolerance must be positive, got {tolerance}"
            )));
        }
        self.tolerance = tolerance;
        Ok(self)
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Largest Euclidean vertex norm.
    pub fn circumradius(&self) -> f64 {
        self.vertices.iter().map(|v| v.len()).fold(0.0, f64::max)
    }

    /// Euclidean distance from the origin to the nearest edge line.
    pub fn inradius(&self) -> f64 {
        self.gauge
            .iter()
            .map(|g| 1.0 / g.len())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    /// Index `i` of the edge `vertices[i] → vertices[i+1]` whose cone
    /// contains argument `phi ∈ [0, 2π)`.
    fn sector(&self, phi: f64) -> usize {
        let n = self.angles.len();
        let k = self.angles.partition_point(|&a| a <= phi);
        if k == 0 {
            n - 1
        } else {
            k - 1
        }
    }

    /// The Minkowski functional `inf{λ ≥ 0 : x ∈ λA}`.
    pub fn minkowski_functional(&self, x: Vec2) -> f64 {
        if x.x == 0.0 && x.y == 0.0 {
            return 0.0;
        }
        let n = self.gauge.len();
        let i = self.sector(x.angle());
        let a = self.gauge[(i + n - 1) % n].dot(x);
        let b = self.gauge[i].dot(x);
        let c = self.gauge[(i + 1) % n].dot(x);
        a.max(b).max(c)
    }

    /// Shorthand for [`minkowski_functional`](Self::minkowski_functional).
    #[inline]
    pub fn norm(&self, x: Vec2) -> f64 {
        self.minkowski_functional(x)
    }

    /// The boundary point of argument `theta`. Exactly a vertex when `theta`
    /// is a vertex argument.
    pub fn radial_vector(&self, theta: f64) -> Vec2 {
        let phi = super::normalize_angle(theta);
        let n = self.angles.len();
        let i = self.sector(phi);
        let j = (i + 1) % n;
        if angle_gap(phi, self.angles[i]) <= VERTEX_ANGLE_SNAP {
            return self.vertices[i];
        }
        if angle_gap(phi, self.angles[j]) <= VERTEX_ANGLE_SNAP {
            return self.vertices[j];
        }
        let u = Vec2::from_angle(phi);
        u / self.gauge[i].dot(u)
    }

    /// Length of the longest chord of argument `theta`.
    pub fn signature(&self, theta: f64) -> f64 {
        2.0 * self.radial_vector(theta).len()
    }

    /// Image under a non-singular linear map, re-ordered counter-clockwise.
    pub fn apply_linear(&self, m: LinearMap2) -> Result<Self, GeometryError> {
        let d = m.det();
        if !m.is_finite() || d.abs() <= SINGULAR_DET {
            return Err(GeometryError::SingularMap(d));
        }
        let mut pts: Vec<Vec2> = self.vertices.iter().map(|&v| m.apply(v)).collect();
        if d < 0.0 {
            pts.reverse();
        }
        SymmetricBody::new(pts, self.tolerance)
    }

    pub fn scaled(&self, c: f64) -> Result<Self, GeometryError> {
        self.apply_linear(LinearMap2::diag(c, c))
    }

    /// Checks that every boundary edge has norm-length at most `1 + tolerance`.
    pub fn has_urtc(&self) -> UrtcReport {
        let n = self.vertices.len();
        let mut max_edge_norm: f64 = 0.0;
        let mut violating_edge = None;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let l = self.norm(b - a);
            max_edge_norm = max_edge_norm.max(l);
            if violating_edge.is_none() && l > 1.0 + self.tolerance {
                violating_edge = Some((a, b));
            }
        }
        UrtcReport {
            holds: violating_edge.is_none(),
            max_edge_norm,
            violating_edge,
        }
    }

    /// Absolute tolerance for comparing a norm of `v` against a constant.
    #[inline]
    pub fn tol_at(&self, v: Vec2) -> f64 {
        self.tolerance * v.len().max(1.0)
    }

    /// Relation of the translate `A + v` to `A`.
    pub fn translate_relation(&self, v: Vec2) -> Relation {
        let n = self.norm(v);
        if (n - 2.0).abs() <= self.tol_at(v) {
            Relation::Touch
        } else if n < 2.0 {
            Relation::Overlap
        } else {
            Relation::Disjoint
        }
    }

    /// `min_{y ∈ [a, b]} ‖x − y‖`. The norm is piecewise linear along the
    /// segment, so the minimum sits at an endpoint or where the segment
    /// crosses a ray from `x` through a vertex direction.
    pub fn distance_to_segment(&self, x: Vec2, a: Vec2, b: Vec2) -> f64 {
        let p = a - x;
        let d = b - a;
        let mut best = self.norm(p).min(self.norm(b - x));
        for &v in &self.vertices {
            let den = d.cross(v);
            if den.abs() < 1e-300 {
                continue;
            }
            let t = -p.cross(v) / den;
            if (0.0..=1.0).contains(&t) {
                best = best.min(self.norm(p + d * t));
            }
        }
        best
    }

    /// Distance from `x` to the closed polyline through `poly`.
    pub fn distance_to_polyline(&self, x: Vec2, poly: &[Vec2]) -> f64 {
        let n = poly.len();
        (0..n)
            .map(|i| self.distance_to_segment(x, poly[i], poly[(i + 1) % n]))
            .fold(f64::INFINITY, f64::min)
    }
}

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    d.min(TAU - d)
}

fn check_segments(segments: usize) -> Result<(), GeometryError> {
    if segments < 16 || !segments.is_multiple_of(2) {
        return Err(GeometryError::InvalidBody(format!(
            "segments must be even and at least 16, got {segments}"
        )));
    }
    Ok(())
}

fn regular_polygon_points(n: usize) -> Result<Vec<Vec2>, GeometryError> {
    if n < 3 {
        return Err(GeometryError::InvalidBody(format!("n must be >= 3, got {n}")));
    }
    Ok((0..n)
        .map(|i| {
            // Exact values at the quarter turns keep the axis vertices clean.
            let t = TAU * i as f64 / n as f64;
            let snap = |x: f64| if x.abs() < 1e-15 { 0.0 } else { x };
            if 4 * i % n == 0 {
                match 4 * i / n {
                    0 => Vec2::new(1.0, 0.0),
                    1 => Vec2::new(0.0, 1.0),
                    2 => Vec2::new(-1.0, 0.0),
                    _ => Vec2::new(0.0, -1.0),
                }
            } else {
                Vec2::new(snap(t.cos()), snap(t.sin()))
            }
        })
        .collect())
}

/// Halved difference body `½(P + (−P))` of a convex polygon. It is origin
/// symmetric and its signature equals the longest-chord profile of `P`.
pub fn symmetrize(points: &[Vec2], tolerance: f64) -> Result<SymmetricBody, GeometryError> {
    let base = convex_hull(points, 1e-13);
    if base.len() < 3 || signed_area(&base).abs() <= 1e-300 {
        return Err(GeometryError::DegenerateBody);
    }
    let mut diffs = Vec::with_capacity(base.len() * base.len());
    for &p in &base {
        for &q in &base {
            diffs.push((p - q) * 0.5);
        }
    }
    let hull = convex_hull(&diffs, 1e-13);
    if hull.len() < 4 || signed_area(&hull) <= 0.0 {
        return Err(GeometryError::DegenerateBody);
    }
    SymmetricBody::new(hull, tolerance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn square_norm_is_chebyshev() {
        let sq = SymmetricBody::square();
        assert!(close(sq.norm(Vec2::new(3.0, 1.0)), 3.0, 1e-15));
        assert!(close(sq.norm(Vec2::new(-0.5, 2.0)), 2.0, 1e-15));
        assert_eq!(sq.norm(Vec2::ZERO), 0.0);
    }

    #[test]
    fn disk_norm_is_nearly_euclidean() {
        let d = SymmetricBody::disk(256).unwrap();
        let gap = 1.0 / (PI / 256.0).cos() - 1.0;
        let n = d.norm(Vec2::new(3.0, 4.0));
        assert!(n >= 5.0 - 1e-12 && n <= 5.0 * (1.0 + gap) + 1e-12, "{n}");
    }

    #[test]
    fn hexagon_vertex_has_norm_one() {
        let h = SymmetricBody::hexagon();
        assert!(close(h.norm(Vec2::new(1.0, 0.0)), 1.0, 1e-15));
        let v = h.radial_vector(PI / 3.0);
        assert!(v.dist(Vec2::new(0.5, 3f64.sqrt() / 2.0)) < 1e-15);
    }

    #[test]
    fn radial_vectors_of_square() {
        let sq = SymmetricBody::square();
        assert_eq!(sq.radial_vector(0.0), Vec2::new(1.0, 0.0));
        assert_eq!(sq.radial_vector(PI / 4.0), Vec2::new(1.0, 1.0));
        assert!(close(sq.signature(0.0), 2.0, 1e-15));
        assert!(close(sq.signature(PI / 4.0), 2.0 * 2f64.sqrt(), 1e-15));
    }

    #[test]
    fn symmetrized_triangle_is_hexagon() {
        let tri = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
        let k = symmetrize(&tri, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(k.len(), 6);
        let expected = [
            Vec2::new(0.5, 0.0),
            Vec2::new(0.0, 0.5),
            Vec2::new(-0.5, 0.5),
            Vec2::new(-0.5, 0.0),
            Vec2::new(0.0, -0.5),
            Vec2::new(0.5, -0.5),
        ];
        for e in expected {
            assert!(k.vertices().iter().any(|v| v.dist(e) < 1e-15), "missing {e:?}");
        }
    }

    #[test]
    fn symmetrize_fixes_symmetric_bodies() {
        let sq = SymmetricBody::square();
        let k = symmetrize(sq.vertices(), DEFAULT_TOLERANCE).unwrap();
        assert_eq!(k.vertices(), sq.vertices());
    }

    #[test]
    fn degenerate_input_is_rejected() {
        let seg = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(2.0, 2.0)];
        assert_eq!(symmetrize(&seg, DEFAULT_TOLERANCE), Err(GeometryError::DegenerateBody));
    }

    #[test]
    fn linear_images() {
        let sq = SymmetricBody::square();
        let r = sq.apply_linear(LinearMap2::diag(2.0, 1.0)).unwrap();
        for v in r.vertices() {
            assert!(close(v.x.abs(), 2.0, 0.0) && close(v.y.abs(), 1.0, 0.0));
        }
        let flipped = sq.apply_linear(LinearMap2::diag(-1.0, 1.0)).unwrap();
        assert!(flipped.area() > 0.0);
        assert!(matches!(
            sq.apply_linear(LinearMap2::new(1.0, 2.0, 2.0, 4.0)),
            Err(GeometryError::SingularMap(_))
        ));
    }

    #[test]
    fn urtc_examples() {
        let sq = SymmetricBody::square().has_urtc();
        assert!(!sq.holds);
        assert!(close(sq.max_edge_norm, 2.0, 1e-15));
        assert!(sq.violating_edge.is_some());
        let hex = SymmetricBody::hexagon().has_urtc();
        assert!(hex.holds);
        assert!(close(hex.max_edge_norm, 1.0, 1e-12));
        assert!(SymmetricBody::disk(256).unwrap().has_urtc().holds);
    }

    #[test]
    fn relation_examples() {
        let d = SymmetricBody::disk(256).unwrap();
        assert_eq!(d.translate_relation(Vec2::new(2.0, 0.0)), Relation::Touch);
        let sq = SymmetricBody::square();
        assert_eq!(sq.translate_relation(Vec2::new(1.0, 1.0)), Relation::Overlap);
        assert_eq!(sq.translate_relation(Vec2::new(3.0, 0.0)), Relation::Disjoint);
    }

    #[test]
    fn odd_regular_polygons_are_symmetrized() {
        let t = SymmetricBody::regular(3).unwrap();
        assert_eq!(t.len(), 6);
        let p = SymmetricBody::regular(5).unwrap();
        assert_eq!(p.len(), 10);
        assert!(SymmetricBody::regular(4).unwrap().len() == 4);
    }

    #[test]
    fn segment_distance_matches_sampling() {
        let h = SymmetricBody::hexagon();
        let x = Vec2::new(0.3, -0.2);
        let a = Vec2::new(2.0, -3.0);
        let b = Vec2::new(1.0, 4.0);
        let exact = h.distance_to_segment(x, a, b);
        let sampled = (0..=100_000)
            .map(|i| h.norm(a.lerp(b, i as f64 / 100_000.0) - x))
            .fold(f64::INFINITY, f64::min);
        assert!(exact <= sampled + 1e-12 && sampled - exact < 1e-4);
    }

    #[test]
    fn rejects_bad_polygons() {
        let odd = vec![Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0), Vec2::new(-1.0, 0.0)];
        assert!(matches!(SymmetricBody::new(odd, 1e-9), Err(GeometryError::InvalidBody(_))));
        let cw: Vec<Vec2> = SymmetricBody::square().vertices().iter().rev().copied().collect();
        assert!(SymmetricBody::new(cw, 1e-9).is_err());
        assert!(SymmetricBody::disk(15).is_err());
        assert!(SymmetricBody::disk(18).is_ok());
    }

    #[test]
    fn serde_round_trip() {
        let h = SymmetricBody::hexagon();
        let s = serde_json::to_string(&h).unwrap();
        let back: SymmetricBody = serde_json::from_str(&s).unwrap();
        assert_eq!(back, h);
    }
}
