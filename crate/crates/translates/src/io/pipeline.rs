use serde::{Deserialize, Serialize};

use super::{IoError, WitnessBundle};
use crate::contact_witness::{
    assemble_for_angles, assemble_witness, verify_rigidity, ContactWitness, RigidityReport, WitnessOptions,
};
use crate::geometry::SymmetricBody;
use crate::graphs::{build_graph, is_compatible, is_lattice_unique, GraphKind};
use crate::separation::{
    find_separation, signature_deviation, DirectionSet, FitOptions, SeparationCertificate, Verdict, DEFAULT_MARGIN,
    DEFAULT_MAX_LEVEL,
};

fn stage(stage: &'static str, e: impl std::fmt::Display) -> IoError {
    IoError::Stage {
        stage,
        message: e.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOptions {
    pub max_level: u32,
    pub margin: f64,
    pub fit: FitOptions,
    /// `None` skips the witness stage.
    pub witness: Option<WitnessOptions>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            max_level: DEFAULT_MAX_LEVEL,
            margin: DEFAULT_MARGIN,
            fit: FitOptions::default(),
            witness: Some(WitnessOptions::default()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SeparationRun {
    pub certificate: SeparationCertificate,
    pub witness: Option<ContactWitness>,
    pub rigidity: Option<RigidityReport>,
    /// Why the witness stage did not run, if it was requested.
    pub witness_skipped: Option<String>,
}

fn urtc_message(name: &str, body: &SymmetricBody) -> Option<String> {
    let r = body.has_urtc();
    if r.holds {
        return None;
    }
    Some(match r.violating_edge {
        Some((a, b)) => format!(
            "NotURTC: body {name} has boundary edge [{}, {}] -> [{}, {}] of norm length {}",
            a.x, a.y, b.x, b.y, r.max_edge_norm
        ),
        None => format!("NotURTC: body {name} has an edge of norm length {}", r.max_edge_norm),
    })
}

/// Separation, then (for separated URTC bodies) the contact witness over
/// `a` and its rigidity check against `T(b)`.
pub fn run_pipeline_separate(a: &SymmetricBody, b: &SymmetricBody, opts: &PipelineOptions) -> Result<SeparationRun, IoError> {
    let certificate = find_separation(a, b, opts.max_level, opts.margin, &opts.fit).map_err(|e| stage("separation", e))?;
    let mut run = SeparationRun {
        certificate,
        witness: None,
        rigidity: None,
        witness_skipped: None,
    };
    let Some(wopts) = opts.witness else {
        return Ok(run);
    };
    if run.certificate.verdict != Verdict::Separated {
        run.witness_skipped = Some("bodies are equivalent up to tolerance".to_string());
        return Ok(run);
    }
    if let Some(msg) = urtc_message("A", a).or_else(|| urtc_message("B", b)) {
        run.witness_skipped = Some(msg);
        return Ok(run);
    }
    let w = assemble_witness(a, &run.certificate, &wopts).map_err(|e| stage("witness", e))?;
    run.rigidity = Some(verify_rigidity(a, &w, b, run.certificate.map).map_err(|e| stage("rigidity", e))?);
    run.witness = Some(w);
    Ok(run)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub recomputed_residual: f64,
    pub residual_error: f64,
    /// Recomputed residual agrees with the stored one and with the verdict.
    pub pass: bool,
}

/// Re-evaluates the certificate's map on its direction set.
pub fn verify_certificate(a: &SymmetricBody, b: &SymmetricBody, cert: &SeparationCertificate, margin: f64) -> Result<CertificateCheck, IoError> {
    let angles = DirectionSet::dyadic(cert.level).angles;
    let (res, _) = signature_deviation(a, b, cert.map, &angles).map_err(|e| stage("certificate", e))?;
    let residual_error = (res - cert.residual).abs();
    let verdict_ok = match cert.verdict {
        Verdict::Separated => res >= margin && (cert.epsilon - res / 2.0).abs() <= 1e-9,
        Verdict::EquivalentUpToTolerance => res < margin,
    };
    Ok(CertificateCheck {
        recomputed_residual: res,
        residual_error,
        pass: residual_error <= 1e-9 && verdict_ok,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundleCheck {
    /// Largest coordinate difference from a fresh rebuild.
    pub max_point_error: f64,
    pub points_match: bool,
    pub compatible: bool,
    pub graph_matches: bool,
    pub rings_lattice_unique: bool,
    pub rigidity: RigidityReport,
    pub pass: bool,
}

/// Rebuilds the witness from its angles and `k`, compares it with the
/// bundle and re-runs every check on the bundle's own points.
pub fn verify_bundle(bundle: &WitnessBundle, a: &SymmetricBody, b: &SymmetricBody) -> Result<BundleCheck, IoError> {
    let thetas: Vec<f64> = bundle.components.iter().map(|c| c.theta).collect();
    let w = assemble_for_angles(a, &thetas, bundle.k, bundle.epsilon, bundle.scaled).map_err(|e| stage("rebuild", e))?;
    let max_point_error = if w.all_points.len() == bundle.points.len() {
        w.all_points
            .points
            .iter()
            .zip(&bundle.points)
            .map(|(p, q)| (p.x - q.x).abs().max((p.y - q.y).abs()))
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    let pts = crate::graphs::PointSet::new(bundle.points.clone());
    let compatible = is_compatible(a, &pts).compatible;
    let graph_matches = compatible
        && build_graph(a, &pts, GraphKind::Contact).is_ok_and(|g| g.edges == bundle.graph.edge_pairs());
    let rings = crate::graphs::PointSet::new(
        bundle
            .components
            .iter()
            .flat_map(|c| c.ring.iter().map(|&i| bundle.points[i]))
            .collect(),
    );
    let rings_lattice_unique = build_graph(a, &rings, GraphKind::Contact).is_ok_and(|g| is_lattice_unique(&g).is_some());
    let rigidity = verify_rigidity(a, &w, b, bundle.map).map_err(|e| stage("rigidity", e))?;
    let points_match = max_point_error <= 1e-9;
    Ok(BundleCheck {
        pass: points_match && compatible && graph_matches && rings_lattice_unique && rigidity.identity_ok,
        max_point_error,
        points_match,
        compatible,
        graph_matches,
        rings_lattice_unique,
        rigidity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_skips_witness_with_edge() {
        let sq = SymmetricBody::square();
        let hex = SymmetricBody::hexagon();
        let run = run_pipeline_separate(&sq, &hex, &PipelineOptions::default()).unwrap();
        assert_eq!(run.certificate.verdict, Verdict::Separated);
        let msg = run.witness_skipped.unwrap();
        assert!(msg.starts_with("NotURTC: body A has boundary edge"), "{msg}");
        assert!(run.witness.is_none());
    }

    #[test]
    fn disk_disk_has_no_witness() {
        let d = SymmetricBody::disk(128).unwrap();
        let opts = PipelineOptions {
            max_level: 4,
            ..Default::default()
        };
        let run = run_pipeline_separate(&d, &d, &opts).unwrap();
        assert_eq!(run.certificate.verdict, Verdict::EquivalentUpToTolerance);
        assert!(run.witness.is_none());
        assert!(verify_certificate(&d, &d, &run.certificate, opts.margin).unwrap().pass);
    }

    #[test]
    fn disk_hexagon_bundle_verifies() {
        let d = SymmetricBody::disk(256).unwrap();
        let hex = SymmetricBody::hexagon();
        let opts = PipelineOptions {
            max_level: 5,
            ..Default::default()
        };
        let run = run_pipeline_separate(&d, &hex, &opts).unwrap();
        let w = run.witness.as_ref().unwrap();
        assert!(verify_certificate(&d, &hex, &run.certificate, opts.margin).unwrap().pass);
        let bundle = WitnessBundle::new(w, run.certificate.map);
        let json = serde_json::to_string(&bundle).unwrap();
        let back: WitnessBundle = serde_json::from_str(&json).unwrap();
        assert_eq!(back, bundle);
        let check = verify_bundle(&back, &d, &hex).unwrap();
        assert!(check.pass, "{check:?}");

        let mut broken = back.clone();
        broken.points[3].x += 0.5;
        let check = verify_bundle(&broken, &d, &hex).unwrap();
        assert!(!check.pass && !check.points_match);
    }
}
