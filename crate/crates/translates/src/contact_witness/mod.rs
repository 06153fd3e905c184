//! A point set whose contact graph over `A` cannot be realized as a contact
//! graph over a body `B` that is not a linear image of `A`.
//!
//! Each component is a thick hexagonal ring of lattice points with a beam of
//! direction `θ` suspended inside it by two short connectors. The rings are
//! rigid, so any realization over `T(B)` keeps them fixed; the beam's length
//! then differs by `4ℓ·|ρ_A(θ)/ρ_{T(B)}(θ) − 1|`, which the connectors can
//! only absorb up to a constant slack.

mod attach;
mod verify;

pub use attach::{attach_beam, build_beam, build_ring_graph, hexagon_corners, max_beam_extent, AttachedBeam, Beam, BeamExtent};
pub use verify::{verify_rigidity, ComponentRigidity, RigidityReport, FULL_SLACK_BUDGET};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{SymmetricBody, Vec2};
use crate::graphs::{
    build_graph, is_compatible, is_lattice_unique, lattice_from, EmbeddedGraph, GraphError, GraphKind, Lattice, PointSet,
};
use crate::separation::{SeparationCertificate, Verdict};

/// Number of certificate angles given a beam by default.
pub const DEFAULT_TOP_ANGLES: usize = 3;

/// Desk-scale ring size.
pub const DEFAULT_SCALED_K: i64 = 24;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ContactError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("beam does not fit: ℓ = {ell} (k = {k})")]
    BeamTooShort { k: i64, ell: i64 },
    #[error("beam attachment failed: {0}")]
    AttachFailed(String),
    #[error("certificate does not separate the bodies")]
    NotSeparated,
    #[error("assembled witness is not compatible: points {0} and {1}")]
    Incompatible(usize, usize),
    #[error("ring union is not lattice unique")]
    NotLatticeUnique,
}

/// Which certificate angles receive a beam.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AngleSelection {
    /// The angles with the largest deviations.
    Top(usize),
    /// Every angle of the certificate's direction set.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessOptions {
    /// Ring size; `None` uses `⌈180/ε⌉`.
    pub k_override: Option<i64>,
    pub angles: AngleSelection,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions {
            k_override: Some(DEFAULT_SCALED_K),
            angles: AngleSelection::Top(DEFAULT_TOP_ANGLES),
        }
    }
}

/// `⌈180/ε⌉`.
pub fn full_k(epsilon: f64) -> i64 {
    (FULL_SLACK_BUDGET / epsilon).ceil() as i64
}

/// One translated component and where its points sit in the union.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessComponent {
    pub theta: f64,
    pub translation: Vec2,
    /// Index of the component's first point in `all_points`; the order is
    /// ring, beam, first connector, second connector, first and second junction.
    pub offset: usize,
    pub attached: AttachedBeam,
}

impl WitnessComponent {
    pub fn len(&self) -> usize {
        self.attached.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn ring_range(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.attached.ring.len()
    }

    pub fn beam_range(&self) -> std::ops::Range<usize> {
        let start = self.offset + self.attached.ring.len();
        start..start + self.attached.beam.points.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContactWitness {
    pub k: i64,
    pub epsilon: f64,
    /// Whether `k` was overridden instead of `⌈180/ε⌉`.
    pub scaled: bool,
    pub lattice: Lattice,
    pub components: Vec<WitnessComponent>,
    pub all_points: PointSet,
    pub graph: EmbeddedGraph,
}

impl ContactWitness {
    /// Union of the translated rings.
    pub fn ring_union(&self) -> PointSet {
        PointSet::new(
            self.components
                .iter()
                .flat_map(|c| self.all_points.points[c.ring_range()].iter().copied())
                .collect(),
        )
    }

    /// Indices of the `all_points` entries belonging to rings.
    pub fn ring_indices(&self) -> Vec<usize> {
        self.components.iter().flat_map(|c| c.ring_range()).collect()
    }
}

/// Angles of the certificate that receive beams.
pub fn select_angles(cert: &SeparationCertificate, sel: AngleSelection) -> Vec<f64> {
    match sel {
        AngleSelection::Top(n) => cert.top_angles(n.max(1)),
        AngleSelection::Full => cert.deviations.iter().map(|d| d.theta).collect(),
    }
}

/// Translation of the `i`-th component (0-based): `i·((2k+3)e1 − (k+1)e2)`.
pub fn component_translation(lat: &Lattice, k: i64, i: usize) -> Vec2 {
    (lat.e1 * (2 * k + 3) as f64 - lat.e2 * (k + 1) as f64) * i as f64
}

/// Builds one attached beam per selected angle, translates the components
/// apart and checks the union for compatibility and ring rigidity.
pub fn assemble_witness(body: &SymmetricBody, cert: &SeparationCertificate, opts: &WitnessOptions) -> Result<ContactWitness, ContactError> {
    if cert.verdict != Verdict::Separated {
        return Err(ContactError::NotSeparated);
    }
    let k = opts.k_override.unwrap_or_else(|| full_k(cert.epsilon));
    let thetas = select_angles(cert, opts.angles);
    assemble_for_angles(body, &thetas, k, cert.epsilon, opts.k_override.is_some())
}

/// [`assemble_witness`] with explicit angles and `k`.
pub fn assemble_for_angles(
    body: &SymmetricBody,
    thetas: &[f64],
    k: i64,
    epsilon: f64,
    scaled: bool,
) -> Result<ContactWitness, ContactError> {
    let lat = lattice_from(body, 0.0)?;
    let attached: Vec<AttachedBeam> = thetas
        .par_iter()
        .map(|&th| attach_beam(body, &lat, k, th))
        .collect::<Result<_, _>>()?;

    let mut components = Vec::with_capacity(attached.len());
    let mut points = Vec::new();
    for (i, (a, &theta)) in attached.into_iter().zip(thetas).enumerate() {
        let t = component_translation(&lat, k, i);
        let offset = points.len();
        points.extend(a.points().into_iter().map(|p| p + t));
        components.push(WitnessComponent {
            theta,
            translation: t,
            offset,
            attached: a,
        });
    }
    let all_points = PointSet::new(points);
    let compat = is_compatible(body, &all_points);
    if let Some((i, j)) = compat.violating_pair {
        return Err(ContactError::Incompatible(i, j));
    }
    let graph = build_graph(body, &all_points, GraphKind::Contact)?;
    let witness = ContactWitness {
        k,
        epsilon,
        scaled,
        lattice: lat,
        components,
        all_points,
        graph,
    };
    let rings = build_graph(body, &witness.ring_union(), GraphKind::Contact)?;
    if is_lattice_unique(&rings).is_none() {
        return Err(ContactError::NotLatticeUnique);
    }
    Ok(witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::separation::{find_separation, FitOptions, DEFAULT_MARGIN};

    #[test]
    fn full_k_formula() {
        assert_eq!(full_k(0.5), 360);
        assert_eq!(full_k(0.02), 9000);
    }

    #[test]
    fn translations_keep_rings_touching() {
        let body = SymmetricBody::hexagon();
        let lat = lattice_from(&body, 0.0).unwrap();
        let t = component_translation(&lat, 5, 1);
        let (ring, _) = crate::graphs::lattice_ring(&lat, 5);
        let mut pts = ring.points.clone();
        pts.extend(ring.points.iter().map(|&p| p + t));
        let union = PointSet::new(pts);
        assert!(is_compatible(&body, &union).compatible);
        let g = build_graph(&body, &union, GraphKind::Contact).unwrap();
        assert!(is_lattice_unique(&g).is_some());
    }

    #[test]
    fn disk_hexagon_witness_is_sound() {
        let disk = SymmetricBody::disk(256).unwrap();
        let hex = SymmetricBody::hexagon();
        let cert = find_separation(&disk, &hex, 5, DEFAULT_MARGIN, &FitOptions::default()).unwrap();
        let w = assemble_witness(&disk, &cert, &WitnessOptions::default()).unwrap();
        assert_eq!(w.k, 24);
        assert!(w.scaled);
        assert_eq!(w.components.len(), 3);
        assert!(is_compatible(&disk, &w.all_points).compatible);
        let unit = build_graph(&disk, &w.all_points, GraphKind::UnitDistance).unwrap();
        assert_eq!(unit.edges, w.graph.edges);
    }

    #[test]
    fn single_component_cardinality() {
        let disk = SymmetricBody::disk(256).unwrap();
        let w = assemble_for_angles(&disk, &[0.7], 20, 0.03, true).unwrap();
        let a = &w.components[0].attached;
        assert_eq!(
            w.all_points.len(),
            (12 * 20 + 6) + (4 * a.ell as usize + 1) + a.s1.len() + a.s2.len() + 2
        );
    }

    #[test]
    fn unseparated_certificate_is_rejected() {
        let disk = SymmetricBody::disk(64).unwrap();
        let cert = find_separation(&disk, &disk, 3, DEFAULT_MARGIN, &FitOptions::default()).unwrap();
        assert_eq!(
            assemble_witness(&disk, &cert, &WitnessOptions::default()).unwrap_err(),
            ContactError::NotSeparated
        );
    }
}
