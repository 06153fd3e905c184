use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::IntersectionError;
use crate::geometry::hull::{convex_hull, minkowski_sum, signed_area, strictly_inside};
use crate::geometry::{SymmetricBody, Vec2};
use crate::graphs::{build_graph, has_triangle, lattice_from, ring_coords, EmbeddedGraph, GraphKind, Lattice, LatticeCoord, PointSet};

/// Refuse to build gadgets with more points than this.
pub const MAX_GADGET_POINTS: usize = 10_000_000;

/// How long the tail hanging off each cycle is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailPolicy {
    /// One tail vertex per level, so level `i` sits on ring `3i − 1`.
    Minimal,
    /// `2·⌈area(hull(σ) ⊕ A)/area(A)⌉ + 2` vertices: more pairwise
    /// non-adjacent tail vertices than translates fit around the cycle.
    /// Grows doubly exponentially; usable for `k ≤ 2`.
    Certified,
}

/// Nested cycles `σ₁ ⊂ … ⊂ σ_k` around `s₀`, all on the lattice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestedCycleGadget {
    pub k: usize,
    pub policy: TailPolicy,
    pub lattice: Lattice,
    pub points: PointSet,
    pub coords: Vec<LatticeCoord>,
    pub s0: usize,
    /// Ring radius of each `σ_i`.
    pub radii: Vec<i64>,
    /// `σ₁, …, σ_k`, counter-clockwise.
    pub cycles: Vec<Vec<usize>>,
    /// `κ₀, …, κ_k`; `κ_i` for `i ≥ 1` starts on `σ_i`.
    pub tails: Vec<Vec<usize>>,
    pub t_k: usize,
}

impl NestedCycleGadget {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn cycle_points(&self, level: usize) -> Vec<Vec2> {
        self.cycles[level - 1].iter().map(|&i| self.points.points[i]).collect()
    }

    pub fn intersection_graph(&self, body: &SymmetricBody) -> Result<EmbeddedGraph, IntersectionError> {
        Ok(build_graph(body, &self.points, GraphKind::Intersection)?)
    }
}

/// The six lattice neighbours of `r·e₁` in ring-walk order.
pub fn collar(r: i64) -> [LatticeCoord; 6] {
    [
        LatticeCoord::new(r - 1, 0),
        LatticeCoord::new(r, -1),
        LatticeCoord::new(r + 1, -1),
        LatticeCoord::new(r + 1, 0),
        LatticeCoord::new(r, 1),
        LatticeCoord::new(r - 1, 1),
    ]
}

/// Coordinates of the cycle through ring `r` that detours outside around
/// `r·e₁`.
pub fn detour_cycle(r: i64) -> Vec<LatticeCoord> {
    let mut c: Vec<LatticeCoord> = ring_coords(r).into_iter().skip(1).collect();
    c.extend([LatticeCoord::new(r + 1, -1), LatticeCoord::new(r + 1, 0), LatticeCoord::new(r, 1)]);
    c
}

/// `area(hull(σ) ⊕ A) / area(A)`.
pub fn dilated_area_ratio(body: &SymmetricBody, cycle: &[Vec2]) -> f64 {
    let hull = convex_hull(cycle, 1e-14);
    signed_area(&minkowski_sum(&hull, body.vertices())) / body.area()
}

fn certified_tail_len(body: &SymmetricBody, cycle: &[Vec2]) -> usize {
    2 * dilated_area_ratio(body, cycle).ceil() as usize + 2
}

pub fn build_nested(body: &SymmetricBody, k: usize, policy: TailPolicy) -> Result<NestedCycleGadget, IntersectionError> {
    if !body.has_urtc().holds {
        return Err(IntersectionError::NotUrtc);
    }
    let lattice = lattice_from(body, 0.0)?;
    let mut index: HashMap<LatticeCoord, usize> = HashMap::new();
    let mut coords: Vec<LatticeCoord> = Vec::new();
    let mut add = |c: LatticeCoord, coords: &mut Vec<LatticeCoord>| -> usize {
        *index.entry(c).or_insert_with(|| {
            coords.push(c);
            coords.len() - 1
        })
    };

    let s0 = add(LatticeCoord::new(0, 0), &mut coords);
    let t0 = add(LatticeCoord::new(1, 0), &mut coords);
    let mut tails = vec![vec![s0, t0]];
    let mut cycles = Vec::with_capacity(k);
    let mut radii = Vec::with_capacity(k);
    let mut tip = 1i64;
    for _ in 0..k {
        let r = tip + 1;
        let cycle_coords = detour_cycle(r);
        let cycle: Vec<usize> = cycle_coords.iter().map(|&c| add(c, &mut coords)).collect();
        for c in collar(r) {
            add(c, &mut coords);
        }
        let tail_len = match policy {
            TailPolicy::Minimal => 1,
            TailPolicy::Certified => {
                let pts: Vec<Vec2> = cycle_coords.iter().map(|&c| lattice.point(c)).collect();
                certified_tail_len(body, &pts)
            }
        };
        if coords.len() + tail_len > MAX_GADGET_POINTS {
            return Err(IntersectionError::TooLarge {
                points: coords.len() + tail_len,
            });
        }
        let mut kappa = vec![add(LatticeCoord::new(r + 1, 0), &mut coords)];
        for i in 1..=tail_len as i64 {
            kappa.push(add(LatticeCoord::new(r + 1 + i, 0), &mut coords));
        }
        tip = r + 1 + tail_len as i64;
        radii.push(r);
        cycles.push(cycle);
        tails.push(kappa);
    }
    let t_k = *tails.last().and_then(|t| t.last()).unwrap_or(&t0);
    let points = lattice.points(&coords);
    Ok(NestedCycleGadget {
        k,
        policy,
        lattice,
        points,
        coords,
        s0,
        radii,
        cycles,
        tails,
        t_k,
    })
}

/// True iff no three vertices are pairwise adjacent.
pub fn verify_triangle_free(g: &EmbeddedGraph) -> bool {
    has_triangle(&g.adjacency()).is_none()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestingReport {
    pub levels: usize,
    /// Levels whose cycle fails to enclose `s₀` or the previous cycle.
    pub failures: Vec<usize>,
    pub pass: bool,
}

/// Point-in-polygon check that each `σ_i` strictly encloses `s₀` and every
/// vertex of `σ_{i−1}`.
pub fn verify_nesting(g: &NestedCycleGadget) -> NestingReport {
    let s0 = g.points.points[g.s0];
    let polys: Vec<Vec<Vec2>> = (1..=g.k).map(|i| g.cycle_points(i)).collect();
    let mut failures: Vec<usize> = (0..g.k)
        .into_par_iter()
        .filter(|&i| {
            let eps = 1e-9 * polys[i][0].len().max(1.0);
            let encloses_prev = i == 0 || polys[i - 1].iter().all(|&p| strictly_inside(&polys[i], p, eps));
            !(strictly_inside(&polys[i], s0, eps) && encloses_prev)
        })
        .map(|i| i + 1)
        .collect();
    failures.sort_unstable();
    NestingReport {
        levels: g.k,
        pass: failures.is_empty(),
        failures,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailBound {
    pub level: usize,
    pub tail_len: usize,
    /// `area(hull(σ_level) ⊕ A) / area(A)`.
    pub area_ratio: f64,
    /// `⌊tail_len/2⌋ > area_ratio`.
    pub sufficient: bool,
}

/// Compares each tail with the number of pairwise disjoint translates that
/// fit in the dilated hull of the cycle it hangs from.
pub fn tail_bounds(body: &SymmetricBody, g: &NestedCycleGadget) -> Vec<TailBound> {
    (1..=g.k)
        .map(|level| {
            let area_ratio = dilated_area_ratio(body, &g.cycle_points(level));
            let tail_len = g.tails[level].len() - 1;
            TailBound {
                level,
                tail_len,
                area_ratio,
                sufficient: (tail_len / 2) as f64 > area_ratio,
            }
        })
        .collect()
}
