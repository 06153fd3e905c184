use serde::{Deserialize, Serialize};

use super::{symmetrize, GeometryError, LinearMap2, SymmetricBody, Vec2, DEFAULT_TOLERANCE};

pub const DEFAULT_SEGMENTS: usize = 256;

/// Largest segment count the loader will raise a discretization to.
const MAX_SEGMENTS: usize = 1 << 16;

/// The shape part of a body description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum BodyShape {
    Polygon {
        vertices: Vec<Vec2>,
    },
    Disk {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        segments: Option<usize>,
    },
    /// Regular `n`-gon on the unit circle. `segments` is accepted for schema
    /// uniformity but a polygon needs no discretization.
    Regular {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        segments: Option<usize>,
    },
    Ellipse {
        a: f64,
        b: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        segments: Option<usize>,
    },
}

/// A body as read from JSON: a shape, an optional linear pre-map, an
/// optional tolerance and an optional request to symmetrize.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BodySpec {
    #[serde(flatten)]
    pub shape: BodyShape,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<LinearMap2>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub symmetrize: bool,
}

/// A discretized body plus what the loader did to produce it.
#[derive(Debug, Clone)]
pub struct BuiltBody {
    pub body: SymmetricBody,
    /// Segment count actually used for disks and ellipses.
    pub segments: Option<usize>,
}

impl BodySpec {
    pub fn new(shape: BodyShape) -> Self {
        BodySpec {
            shape,
            map: None,
            tolerance: None,
            symmetrize: false,
        }
    }

    pub fn disk(segments: usize) -> Self {
        BodySpec::new(BodyShape::Disk {
            segments: Some(segments),
        })
    }

    /// Overrides the segment count of a disk or ellipse.
    pub fn with_segments(mut self, n: usize) -> Self {
        match &mut self.shape {
            BodyShape::Disk { segments } | BodyShape::Ellipse { segments, .. } => *segments = Some(n),
            BodyShape::Regular { segments, .. } => *segments = Some(n),
            BodyShape::Polygon { .. } => {}
        }
        self
    }

    pub fn build(&self) -> Result<SymmetricBody, GeometryError> {
        self.build_with_info().map(|b| b.body)
    }

    /// Discretizes and validates. Smooth primitives have their segment count
    /// doubled until every boundary edge has norm-length at most 1.
    pub fn build_with_info(&self) -> Result<BuiltBody, GeometryError> {
        let tol = self.tolerance.unwrap_or(DEFAULT_TOLERANCE);
        let (mut body, segments) = match &self.shape {
            BodyShape::Polygon { vertices } => {
                let b = if self.symmetrize {
                    symmetrize(vertices, tol)?
                } else {
                    SymmetricBody::new(vertices.clone(), tol)?
                };
                (b, None)
            }
            BodyShape::Disk { segments } => {
                let mut n = segments.unwrap_or(DEFAULT_SEGMENTS);
                loop {
                    let b = SymmetricBody::disk(n)?;
                    if b.has_urtc().holds || n >= MAX_SEGMENTS {
                        break (b, Some(n));
                    }
                    n *= 2;
                }
            }
            BodyShape::Regular { n, segments } => {
                if let Some(s) = segments {
                    check_segment_field(*s)?;
                }
                (SymmetricBody::regular(*n)?, None)
            }
            BodyShape::Ellipse { a, b, segments } => {
                let mut n = segments.unwrap_or(DEFAULT_SEGMENTS);
                loop {
                    let body = SymmetricBody::ellipse(*a, *b, n)?;
                    if body.has_urtc().holds || n >= MAX_SEGMENTS {
                        break (body, Some(n));
                    }
                    n *= 2;
                }
            }
        };
        if let Some(m) = self.map {
            body = body.apply_linear(m)?;
        }
        let body = body.with_tolerance(tol)?;
        Ok(BuiltBody { body, segments })
    }
}

fn check_segment_field(s: usize) -> Result<(), GeometryError> {
    if s < 16 || !s.is_multiple_of(2) {
        return Err(GeometryError::InvalidBody(format!(
            "segments must be even and at least 16, got {s}"
        )));
    }
    Ok(())
}
