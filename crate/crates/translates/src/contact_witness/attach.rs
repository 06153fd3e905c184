use serde::{Deserialize, Serialize};

use super::ContactError;
use crate::geometry::hull::{convex_hull, line_interval};
use crate::geometry::{SymmetricBody, Vec2};
use crate::graphs::{build_graph, junction_point, lattice_ring, third_points, EmbeddedGraph, GraphError, GraphKind, Lattice, PointSet};

/// Contact graph of the thick ring at distance `k` and `k + 1`.
pub fn build_ring_graph(body: &SymmetricBody, lat: &Lattice, k: i64) -> Result<EmbeddedGraph, GraphError> {
    build_graph(body, &lattice_ring(lat, k).0, GraphKind::Contact)
}

/// Corners of the hexagon through the lattice points at distance `k`.
pub fn hexagon_corners(lat: &Lattice, k: i64) -> [Vec2; 6] {
    lat.neighbors().map(|v| v * k as f64)
}

/// Double row of lattice points along `e_θ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Beam {
    pub theta: f64,
    pub ell: i64,
    pub e_theta: Vec2,
    pub f_theta: Vec2,
    /// `a·e_θ` for `a = −ℓ..=ℓ`, then `a·e_θ + f_θ` for `a = −ℓ..ℓ`.
    pub points: PointSet,
}

/// `e_θ` of norm 2, `f_θ` the left third point of `0, e_θ`, and the
/// `4ℓ + 1` beam points.
pub fn build_beam(body: &SymmetricBody, theta: f64, ell: i64) -> Result<Beam, GraphError> {
    let e = body.radial_vector(theta) * 2.0;
    let f = third_points(body, Vec2::ZERO, e)?.left;
    let mut pts: Vec<Vec2> = (-ell..=ell).map(|a| e * a as f64).collect();
    pts.extend((-ell..ell).map(|a| e * a as f64 + f));
    Ok(Beam {
        theta,
        ell,
        e_theta: e,
        f_theta: f,
        points: PointSet::new(pts),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamExtent {
    /// Ray parameter (in units of `e_θ`) where the distance to the hexagon
    /// first drops to 4.
    pub r_max: f64,
    /// Largest integer strictly below `r_max`.
    pub ell: i64,
}

/// How far the beam may reach along `θ` while staying at norm distance
/// more than 4 from the hexagon through the ring's inner points.
pub fn max_beam_extent(body: &SymmetricBody, lat: &Lattice, k: i64, theta: f64) -> Result<BeamExtent, ContactError> {
    let e = body.radial_vector(theta) * 2.0;
    let corners = hexagon_corners(lat, k);
    let mut r_max = f64::INFINITY;
    for i in 0..6 {
        // Points within norm distance 4 of the edge form a convex sausage.
        let mut pts: Vec<Vec2> = body.vertices().iter().map(|&v| corners[i] + v * 4.0).collect();
        pts.extend(body.vertices().iter().map(|&v| corners[(i + 1) % 6] + v * 4.0));
        let sausage = convex_hull(&pts, 1e-15);
        if let Some((lo, hi)) = line_interval(&sausage, Vec2::ZERO, e) {
            if hi >= 0.0 {
                r_max = r_max.min(lo.max(0.0));
            }
        }
    }
    let ell = r_max.ceil() as i64 - 1;
    if ell < 1 {
        return Err(ContactError::BeamTooShort { k, ell });
    }
    Ok(BeamExtent { r_max, ell })
}

/// A ring with a beam attached to it at both ends.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttachedBeam {
    pub theta: f64,
    pub k: i64,
    pub r_max: f64,
    pub ell: i64,
    pub ring: PointSet,
    pub beam: Beam,
    /// `s·e_θ, (s−1)·e_θ, …, (s−s′)·e_θ`.
    pub s1: PointSet,
    /// Mirror image of `s1` through the origin.
    pub s2: PointSet,
    pub z1: Vec2,
    pub z2: Vec2,
    /// Ring points touching the outer connector ends.
    pub p: Vec2,
    pub q: Vec2,
    /// Beam ends `±ℓ·e_θ`.
    pub p1: Vec2,
    pub q1: Vec2,
    /// First ray parameter where `s·e_θ` touches a ring point.
    pub s: f64,
    pub s_prime: i64,
}

impl AttachedBeam {
    pub fn len(&self) -> usize {
        self.ring.len() + self.beam.points.len() + self.s1.len() + self.s2.len() + 2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Ring, beam, connectors and junctions, in that order.
    pub fn points(&self) -> Vec<Vec2> {
        let mut out = Vec::with_capacity(self.len());
        out.extend_from_slice(&self.ring.points);
        out.extend_from_slice(&self.beam.points.points);
        out.extend_from_slice(&self.s1.points);
        out.extend_from_slice(&self.s2.points);
        out.push(self.z1);
        out.push(self.z2);
        out
    }

    /// `‖s·e_θ − ℓ·e_θ‖_A`.
    pub fn connector_span(&self, body: &SymmetricBody) -> f64 {
        body.norm(self.beam.e_theta * (self.s - self.ell as f64))
    }

    /// Path-length bound `6(|S| + 2)` for one connector.
    pub fn slack_per_side(&self) -> f64 {
        6.0 * (self.s1.len() + 2) as f64
    }
}

/// Builds the ring `𝓗_k`, the longest beam fitting inside it, and the two
/// connectors with their junction points.
pub fn attach_beam(body: &SymmetricBody, lat: &Lattice, k: i64, theta: f64) -> Result<AttachedBeam, ContactError> {
    let ext = max_beam_extent(body, lat, k, theta)?;
    let ell = ext.ell;
    let beam = build_beam(body, theta, ell)?;
    let e = beam.e_theta;
    let (ring, _) = lattice_ring(lat, k);

    // First parameter where the ray enters y + 2A for some ring point y.
    let reach = 2.0 * body.circumradius() * (1.0 + 1e-9);
    let dir = e / e.len();
    let template: Vec<Vec2> = body.vertices().iter().map(|&v| v * 2.0).collect();
    let mut best: Option<(f64, Vec2)> = None;
    for &y in &ring.points {
        if dir.cross(y).abs() > reach || dir.dot(y) < 0.0 {
            continue;
        }
        let poly: Vec<Vec2> = template.iter().map(|&v| y + v).collect();
        if let Some((lo, _)) = line_interval(&poly, Vec2::ZERO, e) {
            if lo > 0.0 && best.is_none_or(|(b, _)| lo < b) {
                best = Some((lo, y));
            }
        }
    }
    let (s, p) = best.ok_or_else(|| ContactError::AttachFailed(format!("no ring point along θ = {theta}")))?;
    // Integer gaps are common (θ along a lattice direction) and come out of
    // the clipping with rounding noise either side; `⌊·⌋` must not see it.
    let gap = s - ell as f64 - 1.0;
    let gap = if (gap - gap.round()).abs() < 1e-9 { gap.round() } else { gap };
    if gap < 0.0 {
        return Err(ContactError::AttachFailed(format!("connector start {s} is not beyond ℓ + 1 = {}", ell + 1)));
    }
    let s_prime = gap.floor() as i64;
    let s1: Vec<Vec2> = (0..=s_prime).map(|j| e * (s - j as f64)).collect();
    let s2: Vec<Vec2> = s1.iter().map(|&x| -x).collect();
    let inner = e * (s - s_prime as f64);
    let p1 = e * ell as f64;

    // Junctions sit on the `f_θ` side of the beam line.
    let pick = |a: Vec2, b: Vec2| {
        let z = junction_point(body, a, b, 2.0, e).map_err(|err| ContactError::AttachFailed(format!("θ = {theta}: {err}")))?;
        for c in [a, b] {
            if (body.norm(z - c) - 2.0).abs() > 10.0 * body.tol_at(z - c) {
                return Err(ContactError::AttachFailed(format!("θ = {theta}: junction misses its centres")));
            }
        }
        Ok(z)
    };
    let z1 = pick(inner, p1)?;
    let z2 = pick(-inner, -p1)?;

    Ok(AttachedBeam {
        theta,
        k,
        r_max: ext.r_max,
        ell,
        ring,
        beam,
        s1: PointSet::new(s1),
        s2: PointSet::new(s2),
        z1,
        z2,
        p,
        q: -p,
        p1,
        q1: -p1,
        s,
        s_prime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{is_compatible, is_lattice_unique, lattice_from};

    fn disk() -> SymmetricBody {
        SymmetricBody::disk(256).unwrap()
    }

    #[test]
    fn ring_graphs() {
        let d = disk();
        let lat = lattice_from(&d, 0.0).unwrap();
        for (k, n) in [(1, 18), (2, 30)] {
            let g = build_ring_graph(&d, &lat, k).unwrap();
            assert_eq!(g.n(), n);
            assert!(is_lattice_unique(&g).is_some());
        }
        let c = hexagon_corners(&lat, 5);
        assert!((c[0].len() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn beam_examples() {
        let d = disk();
        let b = build_beam(&d, 0.0, 2).unwrap();
        assert_eq!(b.points.len(), 9);
        assert!((b.f_theta.y - 3f64.sqrt()).abs() < 1e-3);
        for ell in 1..=3 {
            let b = build_beam(&d, 0.4, ell).unwrap();
            assert_eq!(b.points.len(), 4 * ell as usize + 1);
            assert!(is_compatible(&d, &b.points).compatible);
            let g = build_graph(&d, &b.points, GraphKind::Contact).unwrap();
            assert!(is_lattice_unique(&g).is_some());
        }
    }

    /// Brute-force `r_max`: march along the ray with the exact segment
    /// distance until it reaches 4.
    fn r_max_oracle(body: &SymmetricBody, lat: &Lattice, k: i64, theta: f64) -> f64 {
        let e = body.radial_vector(theta) * 2.0;
        let c = hexagon_corners(lat, k);
        let dist = |r: f64| body.distance_to_polyline(e * r, &c);
        let mut r = 0.0;
        let step = 1e-3;
        while dist(r + step) > 4.0 {
            r += step;
        }
        let (mut lo, mut hi) = (r, r + step);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if dist(mid) > 4.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    #[test]
    fn extent_matches_oracle_and_bounds() {
        let d = disk();
        let lat = lattice_from(&d, 0.0).unwrap();
        for &theta in &[0.0, 0.3, 0.52, 1.1, 2.9] {
            let ext = max_beam_extent(&d, &lat, 24, theta).unwrap();
            let oracle = r_max_oracle(&d, &lat, 24, theta);
            assert!((ext.r_max - oracle).abs() < 1e-9, "{theta}: {} vs {oracle}", ext.r_max);
            assert!(ext.ell as f64 >= 3f64.sqrt() / 4.0 * 24.0 - 3.0);
            assert!(ext.ell > 6);
        }
        assert!(max_beam_extent(&d, &lat, 24, 0.0).unwrap().ell >= 8);
    }

    #[test]
    fn attached_beam_properties() {
        let d = disk();
        let lat = lattice_from(&d, 0.0).unwrap();
        let a = attach_beam(&d, &lat, 24, 0.37).unwrap();
        let pts = PointSet::new(a.points());
        assert!(is_compatible(&d, &pts).compatible);
        assert!((d.norm(a.s1.points[0] - a.p) - 2.0).abs() < 1e-9);
        assert!((d.norm(a.z1 - a.p1) - 2.0).abs() < 1e-9);
        assert!((d.norm(a.z1 - *a.s1.points.last().unwrap()) - 2.0).abs() < 1e-9);
        assert!(a.s1.len() <= 13);
        assert!(a.connector_span(&d) < 28.0);
        for &x in &a.ring.points {
            assert!(d.norm(x - a.z1) >= 2.0 - 1e-9);
            for &b in &a.beam.points.points {
                assert!(d.norm(x - b) > 2.0);
            }
        }
        let last = a.s - a.s_prime as f64;
        assert!(last - 1.0 < 1.0 + a.ell as f64 && 1.0 + a.ell as f64 <= last);
    }

    #[test]
    fn hexagon_body_attaches_too() {
        let hex = SymmetricBody::hexagon();
        let lat = lattice_from(&hex, 0.0).unwrap();
        for &theta in &[0.0, 0.4, 1.3] {
            let a = attach_beam(&hex, &lat, 20, theta).unwrap();
            assert!(is_compatible(&hex, &PointSet::new(a.points())).compatible);
        }
    }

    #[test]
    fn connector_start_exactly_one_past_the_beam() {
        // Here the first ring point sits at `s = ℓ + 1` up to rounding.
        let hex = SymmetricBody::hexagon();
        let lat = lattice_from(&hex, 0.0).unwrap();
        let a = attach_beam(&hex, &lat, 24, 5.0 * std::f64::consts::PI / 32.0).unwrap();
        assert!((a.s - (a.ell + 1) as f64).abs() < 1e-9);
        assert_eq!(a.s_prime, 0);
        assert!(is_compatible(&hex, &PointSet::new(a.points())).compatible);
    }

    #[test]
    fn integer_gap_below_rounding() {
        let oct = SymmetricBody::regular(8).unwrap();
        let lat = lattice_from(&oct, 0.0).unwrap();
        let a = attach_beam(&oct, &lat, 64, 0.0).unwrap();
        assert!(is_compatible(&oct, &PointSet::new(a.points())).compatible);
    }
}
