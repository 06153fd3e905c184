//! Lattice-unique orderings and the rigid reconstruction they allow.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{adjacency, EmbeddedGraph, GraphError, Lattice};
use crate::geometry::{LinearMap2, SymmetricBody, Vec2};

/// Searches for an ordering `v1, …, vn` where `v1 v2 v3` is a triangle and
/// each later vertex is adjacent to both ends of an edge that lies in a
/// triangle of earlier vertices.
///
/// Placeability only grows as vertices are placed, so the greedy closure of
/// a seed triangle is maximal and no backtracking is needed. Every triangle
/// is tried as a seed except those inside an already failed closure.
pub fn is_lattice_unique(g: &EmbeddedGraph) -> Option<Vec<usize>> {
    is_lattice_unique_adj(&g.adjacency())
}

/// [`is_lattice_unique`] on sorted adjacency lists.
pub fn is_lattice_unique_adj(adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = adj.len();
    if n < 3 {
        return None;
    }
    let cap = n.saturating_mul(n).max(64);
    let mut steps = 0usize;
    let mut covered = vec![false; n];
    for u in 0..n {
        for &v in adj[u].iter().filter(|&&v| v > u) {
            for w in common(&adj[u], &adj[v]).into_iter().filter(|&w| w > v) {
                if covered[u] && covered[v] && covered[w] {
                    continue;
                }
                let order = closure(adj, [u, v, w], &mut steps, cap)?;
                if order.len() == n {
                    return Some(order);
                }
                for x in order {
                    covered[x] = true;
                }
            }
        }
    }
    None
}

fn common(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Greedy closure from a seed triangle; `None` once the step budget runs out.
fn closure(adj: &[Vec<usize>], seed: [usize; 3], steps: &mut usize, cap: usize) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut placed = vec![false; n];
    let mut order = Vec::new();
    let mut rigid: HashSet<(usize, usize)> = HashSet::new();
    let mut queue: Vec<(usize, usize)> = Vec::new();

    let make_rigid = |a: usize, b: usize, rigid: &mut HashSet<(usize, usize)>, queue: &mut Vec<(usize, usize)>| {
        let e = (a.min(b), a.max(b));
        if rigid.insert(e) {
            queue.push(e);
        }
    };

    for &s in &seed {
        placed[s] = true;
        order.push(s);
    }
    make_rigid(seed[0], seed[1], &mut rigid, &mut queue);
    make_rigid(seed[1], seed[2], &mut rigid, &mut queue);
    make_rigid(seed[0], seed[2], &mut rigid, &mut queue);

    while let Some((a, b)) = queue.pop() {
        for w in common(&adj[a], &adj[b]) {
            *steps += 1;
            if *steps > cap {
                return None;
            }
            if placed[w] {
                continue;
            }
            placed[w] = true;
            order.push(w);
            // Every triangle through w among placed vertices becomes rigid.
            let nbrs: Vec<usize> = adj[w].iter().copied().filter(|&x| placed[x]).collect();
            for (s, &x) in nbrs.iter().enumerate() {
                for &y in &nbrs[s + 1..] {
                    if adj[x].binary_search(&y).is_ok() {
                        make_rigid(w, x, &mut rigid, &mut queue);
                        make_rigid(w, y, &mut rigid, &mut queue);
                        make_rigid(x, y, &mut rigid, &mut queue);
                    }
                }
            }
        }
    }
    Some(order)
}

/// Linear map recovered from a rigid redraw.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RigidMap {
    /// Sends target positions (relative to the first vertex) to source ones.
    pub map: LinearMap2,
    /// Largest Euclidean mismatch over all vertices.
    pub residual: f64,
}

/// Recovers the linear map `T` with `T(target_i − target_1) = source_{iso i} − source_1`.
///
/// `iso[t]` is the source vertex matched with target vertex `t`. The source
/// graph must be lattice unique; the map is read off its first triangle and
/// checked on every vertex against `tol · diameter`.
pub fn reconstruct_map(
    source: &EmbeddedGraph,
    target: &EmbeddedGraph,
    iso: &[usize],
    tol: f64,
) -> Result<RigidMap, GraphError> {
    let n = source.n();
    if target.n() != n || iso.len() != n {
        return Err(GraphError::NotIsomorphic(format!(
            "sizes differ: source {n}, target {}, map {}",
            target.n(),
            iso.len()
        )));
    }
    let mut inv = vec![usize::MAX; n];
    for (t, &s) in iso.iter().enumerate() {
        if s >= n || inv[s] != usize::MAX {
            return Err(GraphError::NotIsomorphic("vertex map is not a bijection".into()));
        }
        inv[s] = t;
    }
    if source.edges.len() != target.edges.len() {
        return Err(GraphError::NotIsomorphic(format!(
            "edge counts differ: {} vs {}",
            source.edges.len(),
            target.edges.len()
        )));
    }
    let src_adj = adjacency(n, &source.edges);
    for &(i, j) in &target.edges {
        if src_adj[iso[i]].binary_search(&iso[j]).is_err() {
            return Err(GraphError::NotIsomorphic(format!("target edge ({i},{j}) has no partner")));
        }
    }
    let order = is_lattice_unique_adj(&src_adj).ok_or(GraphError::NotLatticeUnique)?;
    let (s1, s2, s3) = (order[0], order[1], order[2]);
    let sp = &source.points.points;
    let tp = &target.points.points;
    let (t1, t2, t3) = (inv[s1], inv[s2], inv[s3]);
    let s = LinearMap2::from_columns(sp[s2] - sp[s1], sp[s3] - sp[s1]);
    let tg = LinearMap2::from_columns(tp[t2] - tp[t1], tp[t3] - tp[t1]);
    let tg_inv = tg
        .inverse_checked(crate::geometry::SINGULAR_DET)
        .ok_or_else(|| GraphError::Geometry(crate::geometry::GeometryError::SingularMap(tg.det())))?;
    let map = s * tg_inv;

    let limit = tol * source.points.extent().max(1.0);
    let mut residual: f64 = 0.0;
    let mut worst = 0;
    for (t, &si) in iso.iter().enumerate() {
        let r = (map * (tp[t] - tp[t1])).dist(sp[si] - sp[s1]);
        if r > residual {
            residual = r;
            worst = t;
        }
    }
    if residual > limit {
        return Err(GraphError::NotRigid { vertex: worst, residual });
    }
    Ok(RigidMap { map, residual })
}

/// Outcome of the hexagon sandwich check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    /// Largest `‖·‖_A` over the vertices of `½·conv(±e1, ±e2, ±(e1 − e2))`.
    pub inner_max_norm: f64,
    /// Largest hexagon norm over the vertices of `A`.
    pub outer_max_norm: f64,
    /// Extremes of `‖x‖_B / ‖x‖_A` over the samples, if a second body was given.
    pub ratio_min: Option<f64>,
    pub ratio_max: Option<f64>,
    pub samples: usize,
    pub violating_point: Option<Vec2>,
    pub passed: bool,
}

pub const SANDWICH_SAMPLES: usize = 1000;

/// Checks `½·conv(S) ⊂ A ⊂ conv(S)` for `S = {±e1, ±e2, ±(e1 − e2)}`.
///
/// With `other = (B0, L0)`, `B0` is first mapped linearly so that its
/// lattice `L0` lands on `lat`, and `½ ≤ ‖x‖_B / ‖x‖_A ≤ 2` is sampled.
pub fn hexagon_sandwich_check(
    body: &SymmetricBody,
    lat: &Lattice,
    other: Option<(&SymmetricBody, &Lattice)>,
    seed: u64,
) -> Result<SandwichReport, GraphError> {
    let tol = body.tolerance();
    let hex_pts: Vec<Vec2> = lat.neighbors().to_vec();
    let hex = SymmetricBody::new(hex_pts.clone(), tol)?;
    let mut violating_point = None;

    let mut inner_max_norm: f64 = 0.0;
    for &v in &hex_pts {
        let x = v * 0.5;
        let n = body.norm(x);
        inner_max_norm = inner_max_norm.max(n);
        if n > 1.0 + body.tol_at(x) && violating_point.is_none() {
            violating_point = Some(x);
        }
    }
    let mut outer_max_norm: f64 = 0.0;
    for &v in body.vertices() {
        let n = hex.norm(v);
        outer_max_norm = outer_max_norm.max(n);
        if n > 1.0 + hex.tol_at(v) && violating_point.is_none() {
            violating_point = Some(v);
        }
    }

    let (mut ratio_min, mut ratio_max, mut samples) = (None, None, 0);
    if let Some((b0, l0)) = other {
        let to_a = LinearMap2::from_columns(lat.e1, lat.e2);
        let from_b = LinearMap2::from_columns(l0.e1, l0.e2)
            .inverse_checked(crate::geometry::SINGULAR_DET)
            .ok_or(GraphError::InvalidLattice("second lattice is degenerate".into()))?;
        let b = b0.apply_linear(to_a * from_b)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for _ in 0..SANDWICH_SAMPLES {
            let x = Vec2::from_angle(rng.gen_range(0.0..std::f64::consts::TAU)) * rng.gen_range(0.1..10.0);
            let r = b.norm(x) / body.norm(x);
            lo = lo.min(r);
            hi = hi.max(r);
            if !(0.5 - tol..=2.0 + tol).contains(&r) && violating_point.is_none() {
                violating_point = Some(x);
            }
        }
        ratio_min = Some(lo);
        ratio_max = Some(hi);
        samples = SANDWICH_SAMPLES;
    }
    Ok(SandwichReport {
        inner_max_norm,
        outer_max_norm,
        ratio_min,
        ratio_max,
        samples,
        passed: violating_point.is_none(),
        violating_point,
    })
}
