//! Intersection-graph gadgets forcing a centre vertex inside many nested
//! cycles, radial paths carrying concentric cycles `α_j`, and their
//! assembly into ε-overlap drawings of a contact graph.
//!
//! Only concrete drawings are checked. The depths `d_i` come from the
//! canonical lattice drawing.

mod assembly;
mod nested;
mod radial;

pub use assembly::{
    build_assembly, canonical_centers, center_bounds, cross_ray_edges, extract_overlap, overlap_epsilon, overlap_floor,
    perturb_centers, refine_to_contact, scan_levels, verify_center_bounds, verify_cross_edges, CenterReport, CrossEdge,
    CrossEdgeReport, OverlapAssembly, OverlapRealization, RefinementReport, RefinementStep, MIN_ASSEMBLY_K,
};
pub use nested::{
    build_nested, collar, detour_cycle, dilated_area_ratio, tail_bounds, verify_nesting, verify_triangle_free,
    NestedCycleGadget, NestingReport, TailBound, TailPolicy, MAX_GADGET_POINTS,
};
pub use radial::{
    build_radial, build_radial_with, canonical_drawing, cycle_distance_floor, inner_levels, path_depth, perturb_drawing,
    perturbation_trials, perturbed_drawing, skeleton_violation, verify_alpha, winding_around, AlphaReport, AnnulusForm,
    GadgetDrawing, PerturbationSummary, RadialGadget, SkeletonViolation, DEPTH_NOTE, MAX_RESAMPLES, WINDING_GUARD,
};

use thiserror::Error;

use crate::geometry::GeometryError;
use crate::graphs::GraphError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntersectionError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("body fails the unique-triangle property")]
    NotUrtc,
    #[error("gadget would have {points} points")]
    TooLarge { points: usize },
    #[error("path depth d_{index} = {depth} is below {min}")]
    DepthTooSmall { index: usize, depth: usize, min: usize },
    #[error("level {j} outside the valid range (k = {k})")]
    BadLevel { j: usize, k: usize },
    #[error("k = {k} is below {min}")]
    KTooSmall { k: usize, min: usize },
    #[error("host graph is not a contact graph")]
    HostNotContact,
    #[error("host edge ({0}, {1}) is not drawn")]
    HostEdgeMissing(usize, usize),
    #[error("schedule {0:?} is not increasing from 7")]
    BadSchedule(Vec<usize>),
    #[error("no convergence at k = {k}: min distance {min_distance} < {required}")]
    NoConvergence { k: usize, min_distance: f64, required: f64 },
    #[error("drawing does not match the gadget: {0}")]
    DrawingMismatch(String),
    #[error("no admissible perturbation after {attempts} samples")]
    PerturbationFailed { attempts: usize },
}
