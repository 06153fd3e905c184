use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::nested::{build_nested, NestedCycleGadget, TailPolicy};
use super::IntersectionError;
use crate::geometry::hull::argument_variation;
use crate::geometry::{SymmetricBody, Vec2};
use crate::graphs::PointSet;

/// Depths are read off the canonical lattice drawing; whether they are the
/// lexicographically smallest over all drawings is not checked.
pub const DEPTH_NOTE: &str = "depths d_i taken from the canonical drawing, not minimised over all drawings";

/// Largest accepted distance of the summed argument from a multiple of a
/// full turn, as a fraction of a turn.
pub const WINDING_GUARD: f64 = 0.01;

/// Resampling cap for perturbed drawings.
pub const MAX_RESAMPLES: usize = 10_000;

/// `18(k + 1)`.
pub fn inner_levels(k: usize) -> usize {
    18 * (k + 1)
}

/// Lower bound `2(k/9 − 1)` on the distance from `s₀` to the outer cycle of a
/// gadget with `k` nested cycles.
pub fn cycle_distance_floor(k: usize) -> f64 {
    2.0 * (k as f64 / 9.0 - 1.0)
}

/// `⌈(‖s₀u‖_A − 2)/2⌉`.
pub fn path_depth(norm: f64) -> usize {
    ((norm - 2.0) / 2.0).ceil().max(0.0) as usize
}

/// The nested gadget with `18(k+1)` cycles plus a straight path of
/// norm-spaced vertices from `s₀` to every vertex of the outer cycle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialGadget {
    pub k: usize,
    pub k_prime: usize,
    pub base: NestedCycleGadget,
    /// `u₀, …, u_{n−1}`: indices into `base` of the outer cycle, CCW.
    pub boundary: Vec<usize>,
    /// `‖s₀u_i‖_A`.
    pub boundary_norms: Vec<f64>,
    /// `(u_i − s₀)/‖u_i − s₀‖_A`.
    pub directions: Vec<Vec2>,
    /// `d_i`: number of vertices added on the path to `u_i`.
    pub depths: Vec<usize>,
    /// Prefix sums of `depths`; ray vertex `v_i(j)` is stored at
    /// `ray_offsets[i] + j − 1` after the base points.
    pub ray_offsets: Vec<usize>,
}

impl RadialGadget {
    pub fn n(&self) -> usize {
        self.boundary.len()
    }

    pub fn s0(&self) -> Vec2 {
        self.base.points.points[self.base.s0]
    }

    pub fn len(&self) -> usize {
        self.base.len() + self.ray_offsets[self.n()]
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `v_i(j) = s₀ + 2j·v_i`.
    pub fn ray_point(&self, i: usize, j: usize) -> Vec2 {
        self.s0() + self.directions[i] * (2 * j) as f64
    }

    pub fn ray_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(j >= 1 && j <= self.depths[i]);
        self.base.len() + self.ray_offsets[i] + j - 1
    }

    pub fn min_depth(&self) -> usize {
        self.depths.iter().copied().min().unwrap_or(0)
    }

    /// Base points followed by the ray vertices.
    pub fn points(&self) -> PointSet {
        let mut pts = self.base.points.points.clone();
        pts.reserve(self.ray_offsets[self.n()]);
        for i in 0..self.n() {
            pts.extend((1..=self.depths[i]).map(|j| self.ray_point(i, j)));
        }
        PointSet::new(pts)
    }

    /// `π_i`: `s₀, v_i(1), …, v_i(d_i), u_i`.
    pub fn path(&self, i: usize) -> Vec<usize> {
        let mut p = vec![self.base.s0];
        p.extend((1..=self.depths[i]).map(|j| self.ray_index(i, j)));
        p.push(self.boundary[i]);
        p
    }

    /// `α_j`: `v₀(j), …, v_{n−1}(j)`.
    pub fn alpha(&self, j: usize) -> Vec<usize> {
        (0..self.n()).map(|i| self.ray_index(i, j)).collect()
    }
}

pub fn build_radial(body: &SymmetricBody, k: usize) -> Result<RadialGadget, IntersectionError> {
    build_radial_with(body, k, TailPolicy::Minimal)
}

pub fn build_radial_with(body: &SymmetricBody, k: usize, policy: TailPolicy) -> Result<RadialGadget, IntersectionError> {
    if k == 0 {
        return Err(IntersectionError::BadLevel { j: 0, k });
    }
    let k_prime = inner_levels(k);
    let base = build_nested(body, k_prime, policy)?;
    let s0 = base.points.points[base.s0];
    let boundary = base.cycles[k_prime - 1].clone();
    let mut boundary_norms = Vec::with_capacity(boundary.len());
    let mut directions = Vec::with_capacity(boundary.len());
    let mut depths = Vec::with_capacity(boundary.len());
    let mut ray_offsets = vec![0];
    for (i, &u) in boundary.iter().enumerate() {
        let v = base.points.points[u] - s0;
        let norm = body.norm(v);
        let d = path_depth(norm);
        if d < 2 * k {
            return Err(IntersectionError::DepthTooSmall { index: i, depth: d, min: 2 * k });
        }
        boundary_norms.push(norm);
        directions.push(v * (1.0 / norm));
        depths.push(d);
        ray_offsets.push(ray_offsets[i] + d);
    }
    Ok(RadialGadget {
        k,
        k_prime,
        base,
        boundary,
        boundary_norms,
        directions,
        depths,
        ray_offsets,
    })
}

/// Positions of `s₀` and of the ray vertices `v_i(j)` for `j ≤ levels`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GadgetDrawing {
    pub canonical: bool,
    pub n: usize,
    pub levels: usize,
    pub s0: Vec2,
    /// Level-major: `v_i(j)` at `(j − 1)·n + i`.
    pub rays: Vec<Vec2>,
}

impl GadgetDrawing {
    pub fn at(&self, i: usize, j: usize) -> Vec2 {
        if j == 0 {
            self.s0
        } else {
            self.rays[(j - 1) * self.n + i]
        }
    }

    pub fn level(&self, j: usize) -> &[Vec2] {
        &self.rays[(j - 1) * self.n..j * self.n]
    }

    pub fn translated(&self, t: Vec2) -> GadgetDrawing {
        GadgetDrawing {
            s0: self.s0 + t,
            rays: self.rays.iter().map(|&p| p + t).collect(),
            ..self.clone()
        }
    }
}

pub fn canonical_drawing(g: &RadialGadget, levels: usize) -> Result<GadgetDrawing, IntersectionError> {
    if levels > g.min_depth() {
        return Err(IntersectionError::BadLevel { j: levels, k: g.min_depth() });
    }
    let n = g.n();
    let mut rays = Vec::with_capacity(n * levels);
    for j in 1..=levels {
        rays.extend((0..n).map(|i| g.ray_point(i, j)));
    }
    Ok(GadgetDrawing {
        canonical: true,
        n,
        levels,
        s0: g.s0(),
        rays,
    })
}

/// An edge of the drawn paths or cycles longer than 2; level 0 is `s₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SkeletonViolation {
    pub from: (usize, usize),
    pub to: (usize, usize),
    pub norm: f64,
}

/// First drawn path edge `v_i(j)v_i(j+1)` or cycle edge `v_i(j)v_{i+1}(j)`
/// whose norm exceeds 2.
pub fn skeleton_violation(d: &GadgetDrawing, body: &SymmetricBody) -> Option<SkeletonViolation> {
    let check = |a: (usize, usize), b: (usize, usize)| {
        let v = d.at(b.0, b.1) - d.at(a.0, a.1);
        let norm = body.norm(v);
        (norm > 2.0 + body.tol_at(v)).then_some(SkeletonViolation { from: a, to: b, norm })
    };
    for j in 1..=d.levels {
        for i in 0..d.n {
            if let Some(v) = check((i, j - 1), (i, j)).or_else(|| check((i, j), ((i + 1) % d.n, j))) {
                return Some(v);
            }
        }
    }
    None
}

fn sample_in_body(body: &SymmetricBody, radius: f64, rng: &mut ChaCha8Rng) -> Vec2 {
    let r = body.circumradius();
    loop {
        let p = Vec2::new(rng.gen_range(-r..=r), rng.gen_range(-r..=r));
        if body.norm(p) <= 1.0 {
            return p * radius;
        }
    }
}

/// Contracts the drawing towards `s₀` by `1 − radius` and moves every vertex
/// by independent noise drawn uniformly from `radius·A`. The contraction
/// keeps edges of length exactly 2 within 2.
pub fn perturb_drawing(d: &GadgetDrawing, body: &SymmetricBody, radius: f64, rng: &mut ChaCha8Rng) -> GadgetDrawing {
    let s0 = d.s0;
    let rays = d
        .rays
        .iter()
        .map(|&p| s0 + (p - s0) * (1.0 - radius) + sample_in_body(body, radius, rng))
        .collect();
    GadgetDrawing {
        canonical: false,
        n: d.n,
        levels: d.levels,
        s0: s0 + sample_in_body(body, radius, rng),
        rays,
    }
}

/// A perturbed drawing that still draws every path and cycle edge, with
/// the radius halved after every ten rejected samples.
pub fn perturbed_drawing(
    d: &GadgetDrawing,
    body: &SymmetricBody,
    radius: f64,
    rng: &mut ChaCha8Rng,
) -> Result<(GadgetDrawing, f64, usize), IntersectionError> {
    let mut r = radius;
    for attempt in 0..MAX_RESAMPLES {
        let p = perturb_drawing(d, body, r, rng);
        if skeleton_violation(&p, body).is_none() {
            return Ok((p, r, attempt));
        }
        if attempt % 10 == 9 {
            r *= 0.5;
        }
    }
    Err(IntersectionError::PerturbationFailed { attempts: MAX_RESAMPLES })
}

/// Rounded number of turns of the closed polyline around `center`, and the
/// distance of the exact count from that integer.
pub fn winding_around(poly: &[Vec2], center: Vec2) -> (i64, f64) {
    let turns = argument_variation(poly, center) / std::f64::consts::TAU;
    let w = turns.round();
    (w as i64, (turns - w).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnnulusForm {
    /// `[2j − 1, 2j]`, for the whole cycle.
    Closed,
    /// `(2j − 2, 2j]`, for the vertices.
    Open,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaReport {
    pub j: usize,
    pub n: usize,
    pub max_edge_norm: f64,
    /// `i` of the longest edge `v_i(j)v_{i+1}(j)`.
    pub worst_edge: usize,
    pub edges_ok: bool,
    pub annulus_form: AnnulusForm,
    pub annulus: (f64, f64),
    pub min_radius: f64,
    pub max_radius: f64,
    /// `i` of the vertex or edge closest to leaving the annulus.
    pub worst_vertex: usize,
    pub annulus_ok: bool,
    pub winding: i64,
    pub winding_residual: f64,
    pub winding_ok: bool,
    pub pass: bool,
    pub note: String,
}

/// Edge, annulus and winding checks on the cycle `α_j` of a drawing.
/// Canonical drawings are held to the closed annulus along every edge;
/// others to the open annulus at the vertices.
pub fn verify_alpha(g: &RadialGadget, d: &GadgetDrawing, body: &SymmetricBody, j: usize) -> Result<AlphaReport, IntersectionError> {
    if j < 3 || j > g.k || j > d.levels || d.n != g.n() {
        return Err(IntersectionError::BadLevel { j, k: g.k.min(d.levels) });
    }
    let cyc = d.level(j);
    let n = cyc.len();
    let s0 = d.s0;
    let jf = j as f64;

    let (mut max_edge_norm, mut worst_edge) = (0.0, 0);
    for i in 0..n {
        let e = body.norm(cyc[(i + 1) % n] - cyc[i]);
        if e > max_edge_norm {
            max_edge_norm = e;
            worst_edge = i;
        }
    }
    let tol = body.tolerance() * 2.0 * jf;
    let edges_ok = max_edge_norm <= 2.0 + body.tolerance() * 2.0;

    let form = if d.canonical { AnnulusForm::Closed } else { AnnulusForm::Open };
    let annulus = match form {
        AnnulusForm::Closed => (2.0 * jf - 1.0, 2.0 * jf),
        AnnulusForm::Open => (2.0 * jf - 2.0, 2.0 * jf),
    };
    let (mut min_radius, mut max_radius) = (f64::INFINITY, 0.0f64);
    let mut worst_vertex = 0;
    let mut worst_margin = f64::INFINITY;
    for i in 0..n {
        let outer = body.norm(cyc[i] - s0);
        let inner = match form {
            AnnulusForm::Closed => body.distance_to_segment(s0, cyc[i], cyc[(i + 1) % n]),
            AnnulusForm::Open => outer,
        };
        min_radius = min_radius.min(inner);
        max_radius = max_radius.max(outer);
        let margin = (inner - annulus.0).min(annulus.1 - outer);
        if margin < worst_margin {
            worst_margin = margin;
            worst_vertex = i;
        }
    }
    let annulus_ok = match form {
        AnnulusForm::Closed => min_radius >= annulus.0 - tol,
        AnnulusForm::Open => min_radius > annulus.0,
    } && max_radius <= annulus.1 + tol;

    let (winding, winding_residual) = winding_around(cyc, s0);
    let winding_ok = winding.abs() == 1 && winding_residual < WINDING_GUARD;
    Ok(AlphaReport {
        j,
        n,
        max_edge_norm,
        worst_edge,
        edges_ok,
        annulus_form: form,
        annulus,
        min_radius,
        max_radius,
        worst_vertex,
        annulus_ok,
        winding,
        winding_residual,
        winding_ok,
        pass: edges_ok && annulus_ok && winding_ok,
        note: DEPTH_NOTE.to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSummary {
    pub trials: usize,
    pub requested_radius: f64,
    pub smallest_radius_used: f64,
    pub resamples: usize,
    /// `(trial, j)` of every failed cycle check.
    pub failures: Vec<(usize, usize)>,
    /// Smallest `‖s₀v_i(j)‖ − (2j − 2)` seen.
    pub min_inner_margin: f64,
    pub pass: bool,
}

/// Runs [`verify_alpha`] for `3 ≤ j ≤ k` on `trials` perturbed drawings.
pub fn perturbation_trials(
    g: &RadialGadget,
    body: &SymmetricBody,
    trials: usize,
    radius: f64,
    seed: u64,
) -> Result<PerturbationSummary, IntersectionError> {
    let base = canonical_drawing(g, g.k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut summary = PerturbationSummary {
        trials,
        requested_radius: radius,
        smallest_radius_used: radius,
        resamples: 0,
        failures: Vec::new(),
        min_inner_margin: f64::INFINITY,
        pass: true,
    };
    for t in 0..trials {
        let (d, used, attempts) = perturbed_drawing(&base, body, radius, &mut rng)?;
        summary.smallest_radius_used = summary.smallest_radius_used.min(used);
        summary.resamples += attempts;
        for j in 3..=g.k {
            let r = verify_alpha(g, &d, body, j)?;
            summary.min_inner_margin = summary.min_inner_margin.min(r.min_radius - r.annulus.0);
            if !r.pass {
                summary.failures.push((t, j));
            }
        }
    }
    summary.pass = summary.failures.is_empty();
    Ok(summary)
}
