//! Point sets and the graphs their translates induce: contact, unit-distance,
//! intersection and ε-overlap graphs, plus the triangular lattice spanned by
//! two touching vectors and rigidity of lattice-unique drawings.

mod lattice;
pub mod pairs;
mod touch;
mod unique;

pub use lattice::{lattice_distance, lattice_from, lattice_ring, ring_coords, Lattice, LatticeCoord, NEIGHBOR_STEPS};
pub use touch::{junction_point, third_points, two_center_points, TouchPoints};
pub use unique::{
    hexagon_sandwich_check, is_lattice_unique, is_lattice_unique_adj, reconstruct_map, RigidMap, SANDWICH_SAMPLES,
    SandwichReport,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{GeometryError, SymmetricBody, Vec2};

/// Contact pairs closer than `2 − AMBIGUITY_FACTOR·τ` are overlaps, not
/// numerically fuzzy contacts.
pub const AMBIGUITY_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("points {0} and {1} are not compatible: norm distance {2}")]
    NotCompatible(usize, usize, f64),
    #[error("points {0} and {1} are ambiguously close to touching: norm distance {2}")]
    AmbiguousContact(usize, usize, f64),
    #[error("points {0} and {1} are closer than 2 − ε: norm distance {2}")]
    PairTooClose(usize, usize, f64),
    #[error("centers are not at the required norm distance (got {0})")]
    NotTouching(f64),
    #[error("boundaries share a segment of length {overlap:e} or meet in {clusters} places; the body fails the unique-triangle property")]
    ManySolutions { clusters: usize, overlap: f64 },
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("source graph is not lattice unique")]
    NotLatticeUnique,
    #[error("vertex correspondence is not a graph isomorphism: {0}")]
    NotIsomorphic(String),
    #[error("drawing is not rigid: vertex {vertex} misses its partner by {residual:e}")]
    NotRigid { vertex: usize, residual: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Indexed planar points.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PointSet {
    pub points: Vec<Vec2>,
}

impl PointSet {
    pub fn new(points: Vec<Vec2>) -> Self {
        PointSet { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// First pair of points within Euclidean distance `tol` of each other.
    pub fn duplicate_pair(&self, tol: f64) -> Option<(usize, usize)> {
        pairs::scan_close_pairs(&self.points, tol, |i, j| Some((i, j)))
            .into_iter()
            .next()
    }

    pub fn translated(&self, t: Vec2) -> PointSet {
        PointSet::new(self.points.iter().map(|&p| p + t).collect())
    }

    /// Largest Euclidean distance between two points, via the bounding box
    /// diagonal (an upper bound within a factor √2).
    pub fn extent(&self) -> f64 {
        if self.points.is_empty() {
            return 0.0;
        }
        let (mut lo, mut hi) = (self.points[0], self.points[0]);
        for p in &self.points {
            lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        (hi - lo).len()
    }
}

impl From<Vec<Vec2>> for PointSet {
    fn from(points: Vec<Vec2>) -> Self {
        PointSet::new(points)
    }
}

/// Which distance rule generates a graph's edges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    Contact,
    UnitDistance,
    Intersection,
    EpsOverlap(f64),
}

impl GraphKind {
    pub fn name(self) -> &'static str {
        match self {
            GraphKind::Contact => "contact",
            GraphKind::UnitDistance => "unit_distance",
            GraphKind::Intersection => "intersection",
            GraphKind::EpsOverlap(_) => "eps_overlap",
        }
    }

    pub fn epsilon(self) -> Option<f64> {
        match self {
            GraphKind::EpsOverlap(e) => Some(e),
            _ => None,
        }
    }
}

/// A graph drawn on a point set; edges are sorted pairs `i < j`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedGraph {
    pub points: PointSet,
    pub edges: Vec<(usize, usize)>,
    pub kind: GraphKind,
}

impl EmbeddedGraph {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    /// Sorted adjacency lists.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        adjacency(self.n(), &self.edges)
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        let e = if i < j { (i, j) } else { (j, i) };
        self.edges.binary_search(&e).is_ok()
    }
}

/// Sorted adjacency lists of an edge list on `n` vertices.
pub fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(i, j) in edges {
        adj[i].push(j);
        adj[j].push(i);
    }
    for a in &mut adj {
        a.sort_unstable();
        a.dedup();
    }
    adj
}

/// Result of a compatibility scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Compatibility {
    pub compatible: bool,
    /// Smallest norm distance over scanned pairs (`inf` if none is close).
    pub min_distance: f64,
    pub violating_pair: Option<(usize, usize)>,
}

/// Euclidean radius guaranteed to contain every pair at norm distance ≤ `d`.
fn search_radius(body: &SymmetricBody, d: f64) -> f64 {
    d * body.circumradius() * (1.0 + 1e-9) + 1e-12
}

/// Whether all distinct pairs are at norm distance at least `2 − τ`.
pub fn is_compatible(body: &SymmetricBody, pts: &PointSet) -> Compatibility {
    let close = pairs::scan_close_pairs(&pts.points, search_radius(body, 2.0), |i, j| {
        let d = pts.points[j] - pts.points[i];
        Some((body.norm(d), i, j, body.tol_at(d)))
    });
    let mut min_distance = f64::INFINITY;
    let mut violating_pair = None;
    for (n, i, j, tol) in close {
        if n < min_distance {
            min_distance = n;
        }
        if violating_pair.is_none() && n < 2.0 - tol {
            violating_pair = Some((i, j));
        }
    }
    Compatibility {
        compatible: violating_pair.is_none(),
        min_distance,
        violating_pair,
    }
}

/// Builds the graph of `kind` on `pts` over `body`.
pub fn build_graph(body: &SymmetricBody, pts: &PointSet, kind: GraphKind) -> Result<EmbeddedGraph, GraphError> {
    if let GraphKind::EpsOverlap(eps) = kind {
        let all = pairs::close_pairs(&pts.points, search_radius(body, 2.0));
        return build_eps_overlap(body, pts, eps, &all);
    }
    let scanned = pairs::scan_close_pairs(&pts.points, search_radius(body, 2.0), |i, j| {
        let d = pts.points[j] - pts.points[i];
        let n = body.norm(d);
        let tol = body.tol_at(d);
        (n <= 2.0 + tol).then_some((i, j, n, tol))
    });
    let mut edges = Vec::new();
    for (i, j, n, tol) in scanned {
        let touching = (n - 2.0).abs() <= tol;
        match kind {
            GraphKind::Intersection => edges.push((i, j)),
            GraphKind::UnitDistance => {
                if touching {
                    edges.push((i, j))
                }
            }
            GraphKind::Contact => {
                if n < 2.0 - AMBIGUITY_FACTOR * tol {
                    return Err(GraphError::NotCompatible(i, j, n));
                }
                if !touching {
                    return Err(GraphError::AmbiguousContact(i, j, n));
                }
                edges.push((i, j));
            }
            GraphKind::EpsOverlap(_) => unreachable!(),
        }
    }
    Ok(EmbeddedGraph {
        points: pts.clone(),
        edges,
        kind,
    })
}

/// ε-overlap graph: every pair must be at norm distance at least `2 − ε`
/// (up to τ), and the candidate edges at distance at most `2` (up to τ) are
/// kept.
pub fn build_eps_overlap(
    body: &SymmetricBody,
    pts: &PointSet,
    eps: f64,
    candidate_edges: &[(usize, usize)],
) -> Result<EmbeddedGraph, GraphError> {
    let floor = 2.0 - eps;
    let radius = search_radius(body, floor.max(0.0));
    let too_close = pairs::scan_close_pairs(&pts.points, radius, |i, j| {
        let d = pts.points[j] - pts.points[i];
        let n = body.norm(d);
        (n < floor - body.tol_at(d)).then_some((i, j, n))
    });
    if let Some(&(i, j, n)) = too_close.first() {
        return Err(GraphError::PairTooClose(i, j, n));
    }
    let mut edges: Vec<(usize, usize)> = candidate_edges
        .iter()
        .map(|&(i, j)| if i < j { (i, j) } else { (j, i) })
        .filter(|&(i, j)| {
            i != j && {
                let d = pts.points[j] - pts.points[i];
                body.norm(d) <= 2.0 + body.tol_at(d)
            }
        })
        .collect();
    edges.sort_unstable();
    edges.dedup();
    Ok(EmbeddedGraph {
        points: pts.clone(),
        edges,
        kind: GraphKind::EpsOverlap(eps),
    })
}

/// Whether any three vertices are pairwise adjacent.
pub fn has_triangle(adj: &[Vec<usize>]) -> Option<(usize, usize, usize)> {
    for (u, nu) in adj.iter().enumerate() {
        for &v in nu.iter().filter(|&&v| v > u) {
            let nv = &adj[v];
            // Sorted-list intersection restricted to w > v.
            let (mut a, mut b) = (0, 0);
            while a < nu.len() && b < nv.len() {
                match nu[a].cmp(&nv[b]) {
                    std::cmp::Ordering::Less => a += 1,
                    std::cmp::Ordering::Greater => b += 1,
                    std::cmp::Ordering::Equal => {
                        if nu[a] > v {
                            return Some((u, v, nu[a]));
                        }
                        a += 1;
                        b += 1;
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri() -> PointSet {
        PointSet::new(vec![Vec2::ZERO, Vec2::new(2.0, 0.0), Vec2::new(1.0, 3f64.sqrt())])
    }

    #[test]
    fn compatibility_examples() {
        let disk = SymmetricBody::disk(256).unwrap();
        // The inscribed polygon's norm is slightly above the Euclidean one,
        // so the equilateral triple stays compatible.
        assert!(is_compatible(&disk, &tri()).compatible);
        let bad = PointSet::new(vec![Vec2::ZERO, Vec2::new(1.0, 0.0)]);
        let c = is_compatible(&disk, &bad);
        assert!(!c.compatible);
        assert_eq!(c.violating_pair, Some((0, 1)));
        let sq = SymmetricBody::square();
        let diag = PointSet::new(vec![Vec2::ZERO, Vec2::new(2.0, 2.0)]);
        assert!(is_compatible(&sq, &diag).compatible);
    }

    #[test]
    fn contact_triangle_on_hexagon() {
        let hex = SymmetricBody::hexagon();
        let g = build_graph(&hex, &tri(), GraphKind::Contact).unwrap();
        assert_eq!(g.edges, vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn far_points_have_no_intersection_edge() {
        let disk = SymmetricBody::disk(256).unwrap();
        let pts = PointSet::new(vec![Vec2::ZERO, Vec2::new(3.0, 0.0)]);
        assert!(build_graph(&disk, &pts, GraphKind::Intersection).unwrap().edges.is_empty());
    }

    #[test]
    fn contact_rejects_overlap_and_ambiguity() {
        let sq = SymmetricBody::square();
        let over = PointSet::new(vec![Vec2::ZERO, Vec2::new(1.0, 0.0)]);
        assert!(matches!(
            build_graph(&sq, &over, GraphKind::Contact),
            Err(GraphError::NotCompatible(0, 1, _))
        ));
        let fuzzy = PointSet::new(vec![Vec2::ZERO, Vec2::new(2.0 - 5e-9, 0.0)]);
        assert!(matches!(
            build_graph(&sq, &fuzzy, GraphKind::Contact),
            Err(GraphError::AmbiguousContact(0, 1, _))
        ));
    }

    #[test]
    fn eps_overlap_examples() {
        let disk = SymmetricBody::disk(256).unwrap();
        let near = PointSet::new(vec![Vec2::ZERO, Vec2::new(1.95, 0.0)]);
        let g = build_eps_overlap(&disk, &near, 0.1, &[(0, 1)]).unwrap();
        assert_eq!(g.edges, vec![(0, 1)]);
        let close = PointSet::new(vec![Vec2::ZERO, Vec2::new(1.8, 0.0)]);
        assert!(matches!(
            build_eps_overlap(&disk, &close, 0.1, &[]),
            Err(GraphError::PairTooClose(0, 1, _))
        ));
    }

    #[test]
    fn triangle_detection() {
        let k3 = adjacency(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(has_triangle(&k3), Some((0, 1, 2)));
        let c6 = adjacency(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)]);
        assert_eq!(has_triangle(&c6), None);
    }
}
