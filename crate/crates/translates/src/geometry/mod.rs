//! Centrally symmetric convex polygons and the norms they induce.
//!
//! A body `A` is stored as its boundary polygon; `‖x‖_A` is evaluated by a
//! binary search for the boundary edge whose cone contains `x`, so each norm
//! query costs `O(log m)`. Smooth bodies (disks, ellipses) enter as inscribed
//! polygons.

mod body;
pub mod hull;
mod linear;
mod spec;
mod vec2;

pub use body::{symmetrize, Relation, SymmetricBody, UrtcReport, DEFAULT_TOLERANCE, SINGULAR_DET};
pub use linear::LinearMap2;
pub use spec::{BodyShape, BodySpec, BuiltBody, DEFAULT_SEGMENTS};
pub use vec2::{normalize_angle, Vec2};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("degenerate body: input polygon has empty interior")]
    DegenerateBody,
    #[error("singular linear map (determinant {0:e})")]
    SingularMap(f64),
    #[error("invalid body: {0}")]
    InvalidBody(String),
}
