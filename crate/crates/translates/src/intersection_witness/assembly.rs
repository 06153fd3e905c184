use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::radial::{build_radial, canonical_drawing, GadgetDrawing, RadialGadget};
use super::IntersectionError;
use crate::geometry::{SymmetricBody, Vec2};
use crate::graphs::pairs::scan_close_pairs;
use crate::graphs::{adjacency, build_eps_overlap, build_graph, EmbeddedGraph, GraphKind, PointSet};

/// Smallest `k` for which the centre bounds are proved.
pub const MIN_ASSEMBLY_K: usize = 7;

/// `(4k − 18, 4k + 2)`.
pub fn center_bounds(k: usize) -> (f64, f64) {
    let k = k as f64;
    (4.0 * k - 18.0, 4.0 * k + 2.0)
}

/// `(4k − 18)/(2k + 1)`: the scaled distance floor between any two centres.
pub fn overlap_floor(k: usize) -> f64 {
    center_bounds(k).0 / (2 * k + 1) as f64
}

/// `10/k`.
pub fn overlap_epsilon(k: usize) -> f64 {
    10.0 / k as f64
}

/// Ray levels a cross-edge scan must cover: every pair with `j + j′ ≤ 2k − 5`
/// and the level `k` itself.
pub fn scan_levels(k: usize) -> usize {
    (2 * k).saturating_sub(6).max(k)
}

/// `(2k − 2)·w` for every host vertex `w`.
pub fn canonical_centers(host: &PointSet, k: usize) -> Vec<Vec2> {
    let s = (2 * k) as f64 - 2.0;
    host.points.iter().map(|&w| w * s).collect()
}

/// One copy of the radial gadget per host vertex, centred at `(2k − 2)·w`.
/// The merged graph is not materialised; copies share one gadget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapAssembly {
    pub k: usize,
    pub host: PointSet,
    pub host_edges: Vec<(usize, usize)>,
    pub gadget: RadialGadget,
    pub centers: Vec<Vec2>,
}

impl OverlapAssembly {
    pub fn copies(&self) -> usize {
        self.centers.len()
    }

    pub fn len(&self) -> usize {
        self.copies() * self.gadget.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn translation(&self, w: usize) -> Vec2 {
        self.centers[w] - self.gadget.s0()
    }

    /// All points of copy `w`, in gadget order.
    pub fn copy_points(&self, w: usize) -> PointSet {
        self.gadget.points().translated(self.translation(w))
    }

    /// Canonical drawings of every copy's rays up to `levels`.
    pub fn canonical_drawings(&self, levels: usize) -> Result<Vec<GadgetDrawing>, IntersectionError> {
        let d = canonical_drawing(&self.gadget, levels)?;
        Ok((0..self.copies()).map(|w| d.translated(self.translation(w))).collect())
    }
}

pub fn build_assembly(body: &SymmetricBody, host: &EmbeddedGraph, k: usize) -> Result<OverlapAssembly, IntersectionError> {
    if host.kind != GraphKind::Contact {
        return Err(IntersectionError::HostNotContact);
    }
    if k < MIN_ASSEMBLY_K {
        return Err(IntersectionError::KTooSmall { k, min: MIN_ASSEMBLY_K });
    }
    let gadget = build_radial(body, k)?;
    Ok(OverlapAssembly {
        k,
        centers: canonical_centers(&host.points, k),
        host: host.points.clone(),
        host_edges: host.edges.clone(),
        gadget,
    })
}

/// An edge `v_i(j)v′_{i′}(j′)` between ray vertices of different copies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossEdge {
    pub copy: usize,
    pub i: usize,
    pub j: usize,
    pub other_copy: usize,
    pub other_i: usize,
    pub other_j: usize,
    pub norm: f64,
}

impl CrossEdge {
    pub fn level_sum(&self) -> usize {
        self.j + self.other_j
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossEdgeReport {
    pub k: usize,
    /// `2k − 4`.
    pub floor: usize,
    pub scanned_levels: usize,
    pub cross_edges: usize,
    pub min_level_sum: Option<usize>,
    pub violations: Vec<CrossEdge>,
    /// For each host edge, whether some `v_i(k)v′_{i′}(k)` edge joins the
    /// two copies.
    pub host_edges_linked: Vec<((usize, usize), bool)>,
    pub pass: bool,
}

/// All cross-copy ray edges with both levels at most the drawings' level
/// count.
pub fn cross_ray_edges(body: &SymmetricBody, drawings: &[GadgetDrawing]) -> Vec<CrossEdge> {
    let mut pts = Vec::new();
    let mut labels = Vec::new();
    for (w, d) in drawings.iter().enumerate() {
        for j in 1..=d.levels {
            for (i, &p) in d.level(j).iter().enumerate() {
                pts.push(p);
                labels.push((w, i, j));
            }
        }
    }
    scan_close_pairs(&pts, 2.0 * body.circumradius() * (1.0 + 1e-9), |a, b| {
        let (wa, ia, ja) = labels[a];
        let (wb, ib, jb) = labels[b];
        if wa == wb {
            return None;
        }
        let v = pts[b] - pts[a];
        let norm = body.norm(v);
        (norm <= 2.0 + body.tol_at(v)).then_some(CrossEdge {
            copy: wa,
            i: ia,
            j: ja,
            other_copy: wb,
            other_i: ib,
            other_j: jb,
            norm,
        })
    })
}

/// Scans every cross-copy ray edge that could violate `j + j′ ≥ 2k − 4` and
/// looks for a level-`k` edge across each host edge.
pub fn verify_cross_edges(
    assembly: &OverlapAssembly,
    body: &SymmetricBody,
    drawings: &[GadgetDrawing],
) -> Result<CrossEdgeReport, IntersectionError> {
    let k = assembly.k;
    let levels = scan_levels(k);
    if drawings.len() != assembly.copies() || drawings.iter().any(|d| d.levels < levels) {
        return Err(IntersectionError::DrawingMismatch(format!(
            "need {} drawings with at least {levels} ray levels",
            assembly.copies()
        )));
    }
    let edges = cross_ray_edges(body, drawings);
    let floor = 2 * k - 4;
    let violations: Vec<CrossEdge> = edges.iter().copied().filter(|e| e.level_sum() < floor).collect();
    let host_edges_linked: Vec<((usize, usize), bool)> = assembly
        .host_edges
        .iter()
        .map(|&(a, b)| {
            let linked = edges.iter().any(|e| {
                e.j == k && e.other_j == k && ((e.copy, e.other_copy) == (a, b) || (e.copy, e.other_copy) == (b, a))
            });
            ((a, b), linked)
        })
        .collect();
    let pass = violations.is_empty() && host_edges_linked.iter().all(|&(_, l)| l);
    Ok(CrossEdgeReport {
        k,
        floor,
        scanned_levels: levels,
        cross_edges: edges.len(),
        min_level_sum: edges.iter().map(CrossEdge::level_sum).min(),
        violations,
        host_edges_linked,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CenterReport {
    pub k: usize,
    pub lower: f64,
    pub upper: f64,
    pub min_distance: f64,
    pub min_pair: Option<(usize, usize)>,
    /// Largest distance between centres of host-adjacent copies.
    pub max_adjacent: f64,
    pub max_adjacent_pair: Option<(usize, usize)>,
    pub violation: Option<(usize, usize, f64)>,
    pub pass: bool,
}

/// Every pair of centres at least `4k − 18` apart, and host-adjacent pairs
/// at most `4k + 2`, measured in `body`.
pub fn verify_center_bounds(assembly: &OverlapAssembly, centers: &[Vec2], body: &SymmetricBody) -> CenterReport {
    let k = assembly.k;
    let (lower, upper) = center_bounds(k);
    let mut r = CenterReport {
        k,
        lower,
        upper,
        min_distance: f64::INFINITY,
        min_pair: None,
        max_adjacent: 0.0,
        max_adjacent_pair: None,
        violation: None,
        pass: true,
    };
    let adj = |a: usize, b: usize| assembly.host_edges.contains(&(a.min(b), a.max(b)));
    for a in 0..centers.len() {
        for b in a + 1..centers.len() {
            let v = centers[b] - centers[a];
            let d = body.norm(v);
            let tol = body.tol_at(v);
            if d < r.min_distance {
                r.min_distance = d;
                r.min_pair = Some((a, b));
            }
            let adjacent = adj(a, b);
            if adjacent && d > r.max_adjacent {
                r.max_adjacent = d;
                r.max_adjacent_pair = Some((a, b));
            }
            if r.violation.is_none() && (d < lower - tol || (adjacent && d > upper + tol)) {
                r.violation = Some((a, b, d));
            }
        }
    }
    r.pass = r.violation.is_none();
    r
}

/// Centres moved by independent noise drawn uniformly from `radius·A`.
pub fn perturb_centers(centers: &[Vec2], body: &SymmetricBody, radius: f64, seed: u64) -> Vec<Vec2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = body.circumradius();
    centers
        .iter()
        .map(|&c| loop {
            let p = Vec2::new(rng.gen_range(-r..=r), rng.gen_range(-r..=r));
            if body.norm(p) <= 1.0 {
                break c + p * radius;
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapRealization {
    pub k: usize,
    /// `10/k`.
    pub epsilon: f64,
    /// `2k + 1`.
    pub scale: f64,
    pub points: PointSet,
    pub edges: Vec<(usize, usize)>,
    /// `(4k − 18)/(2k + 1)`.
    pub floor: f64,
    pub min_distance: f64,
}

fn min_pairwise(body: &SymmetricBody, pts: &[Vec2]) -> f64 {
    let mut m = f64::INFINITY;
    for a in 0..pts.len() {
        for b in a + 1..pts.len() {
            m = m.min(body.norm(pts[b] - pts[a]));
        }
    }
    m
}

fn scaled_overlap(
    body: &SymmetricBody,
    host_edges: &[(usize, usize)],
    centers: &[Vec2],
    k: usize,
) -> Result<OverlapRealization, IntersectionError> {
    let scale = (2 * k + 1) as f64;
    let points = PointSet::new(centers.iter().map(|&c| c * (1.0 / scale)).collect());
    let epsilon = overlap_epsilon(k);
    let g = build_eps_overlap(body, &points, epsilon, host_edges)?;
    if let Some(&(a, b)) = host_edges.iter().find(|&&e| !g.edges.contains(&e)) {
        return Err(IntersectionError::HostEdgeMissing(a, b));
    }
    Ok(OverlapRealization {
        k,
        epsilon,
        scale,
        min_distance: min_pairwise(body, &points.points),
        edges: g.edges,
        points,
        floor: overlap_floor(k),
    })
}

/// The centres of a drawing of the assembly scaled by `1/(2k + 1)`, checked
/// to be a `10/k`-overlap drawing of the host over `body`.
pub fn extract_overlap(
    assembly: &OverlapAssembly,
    centers: &[Vec2],
    body: &SymmetricBody,
) -> Result<OverlapRealization, IntersectionError> {
    if centers.len() != assembly.copies() {
        return Err(IntersectionError::DrawingMismatch(format!("expected {} centres", assembly.copies())));
    }
    scaled_overlap(body, &assembly.host_edges, centers, assembly.k)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementStep {
    pub k: usize,
    pub epsilon_bound: f64,
    /// `max(0, 2 − min distance)`.
    pub realized_epsilon: f64,
    pub min_distance: f64,
    /// Largest offset of a point from the first vertex of its host component.
    pub max_offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementReport {
    pub steps: Vec<RefinementStep>,
    pub monotone: bool,
    /// `2(n − 1)`: no point of a connected host can drift further.
    pub box_bound: f64,
    pub bounded: bool,
    /// Last realization scaled up until its closest pair touches.
    pub limit: PointSet,
    pub contact_edges: Vec<(usize, usize)>,
    pub contains_host: bool,
}

fn components(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let adj = adjacency(n, edges);
    let mut root = vec![usize::MAX; n];
    for s in 0..n {
        if root[s] != usize::MAX {
            continue;
        }
        root[s] = s;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if root[v] == usize::MAX {
                    root[v] = s;
                    stack.push(v);
                }
            }
        }
    }
    root
}

/// Overlap realizations of the host for an increasing `k` schedule, and the
/// contact drawing they approach. `centers_for(k)` supplies the drawn
/// centres of the assembly at each `k`.
pub fn refine_to_contact(
    body: &SymmetricBody,
    host: &EmbeddedGraph,
    schedule: &[usize],
    centers_for: &dyn Fn(usize) -> Vec<Vec2>,
) -> Result<RefinementReport, IntersectionError> {
    if schedule.is_empty() || schedule.windows(2).any(|w| w[0] >= w[1]) || schedule[0] < MIN_ASSEMBLY_K {
        return Err(IntersectionError::BadSchedule(schedule.to_vec()));
    }
    let n = host.points.len();
    let roots = components(n, &host.edges);
    let box_bound = 2.0 * n.saturating_sub(1) as f64;
    let k_last = *schedule.last().unwrap();
    let required = 2.0 - overlap_epsilon(k_last);
    let mut steps = Vec::with_capacity(schedule.len());
    let mut last = None;
    for &k in schedule {
        let centers = centers_for(k);
        if centers.len() != n {
            return Err(IntersectionError::DrawingMismatch(format!("expected {n} centres at k = {k}")));
        }
        if k == k_last && n >= 2 {
            let scaled: Vec<Vec2> = centers.iter().map(|&c| c * (1.0 / (2 * k + 1) as f64)).collect();
            let min_distance = min_pairwise(body, &scaled);
            if min_distance < required - body.tolerance() {
                return Err(IntersectionError::NoConvergence { k, min_distance, required });
            }
        }
        let real = scaled_overlap(body, &host.edges, &centers, k)?;
        let max_offset = (0..n)
            .map(|v| body.norm(real.points.points[v] - real.points.points[roots[v]]))
            .fold(0.0, f64::max);
        steps.push(RefinementStep {
            k,
            epsilon_bound: real.epsilon,
            realized_epsilon: (2.0 - real.min_distance).max(0.0),
            min_distance: real.min_distance,
            max_offset,
        });
        last = Some(real);
    }
    let last = last.expect("schedule is non-empty");
    let grow = if last.min_distance.is_finite() && last.min_distance < 2.0 {
        2.0 / last.min_distance
    } else {
        1.0
    };
    let limit = PointSet::new(last.points.points.iter().map(|&p| p * grow).collect());
    let contact = build_graph(body, &limit, GraphKind::Contact)?;
    let contains_host = host.edges.iter().all(|e| contact.edges.contains(e));
    Ok(RefinementReport {
        monotone: steps.windows(2).all(|w| w[1].min_distance >= w[0].min_distance || n < 2),
        bounded: steps.iter().all(|s| s.max_offset <= box_bound * (1.0 + 1e-9)),
        box_bound,
        steps,
        limit,
        contact_edges: contact.edges,
        contains_host,
    })
}
