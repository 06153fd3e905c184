use serde::{Deserialize, Serialize};

use super::ContactWitness;
use crate::geometry::{GeometryError, LinearMap2, SymmetricBody, Vec2, SINGULAR_DET};

/// Total connector slack allowed at full size: `2 · 6 · (13 + 2)`.
pub const FULL_SLACK_BUDGET: f64 = 180.0;

/// Largest accepted disagreement between the two evaluations of the beam
/// length mismatch.
const IDENTITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentRigidity {
    pub theta: f64,
    pub ell: i64,
    /// `ρ_A(θ) / ρ_{T(B)}(θ)`.
    pub ratio: f64,
    /// `4ℓ·|ratio − 1|`.
    pub d: f64,
    /// `|‖p₁ − q₁‖_{T(B)} − ‖p₁ − q₁‖_A|` from coordinates.
    pub length_gap: f64,
    pub identity_error: f64,
    /// `6(|S₁| + 2) + 6(|S₂| + 2)`.
    pub slack_bound: f64,
    /// `3‖p₁ − p‖_A + 3‖q₁ − q‖_A`.
    pub slack_coords: f64,
    /// `4ℓε`.
    pub scaled_budget: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub components: Vec<ComponentRigidity>,
    /// Index of the component with the largest `d`.
    pub argmax: usize,
    pub max_d: f64,
    /// `true` when judged against `4ℓε` rather than the fixed 180.
    pub scaled: bool,
    pub budget: f64,
    pub exceeds_budget: bool,
    /// Whether the budget covers the argmax component's connector slack.
    pub budget_covers_slack: bool,
    pub identity_ok: bool,
    /// No drawing over `T(B)` can keep the rings fixed and the beam intact.
    pub separated_by_rigidity: bool,
}

/// Compares each beam's length under `A` and `T(B)` with the slack the
/// connectors can absorb.
pub fn verify_rigidity(
    a: &SymmetricBody,
    witness: &ContactWitness,
    b: &SymmetricBody,
    t: LinearMap2,
) -> Result<RigidityReport, GeometryError> {
    let inv = t.inverse_checked(SINGULAR_DET).ok_or(GeometryError::SingularMap(t.det()))?;
    let norm_tb = |v: Vec2| b.norm(inv * v);
    let eps = witness.epsilon;

    let components: Vec<ComponentRigidity> = witness
        .components
        .iter()
        .map(|c| {
            let at = &c.attached;
            let theta = c.theta;
            let rho_a = a.signature(theta);
            let rho_tb = 2.0 / norm_tb(Vec2::from_angle(theta));
            let ratio = rho_a / rho_tb;
            let ell = at.ell as f64;
            let d = 4.0 * ell * (ratio - 1.0).abs();
            let v = at.p1 - at.q1;
            let length_gap = (norm_tb(v) - a.norm(v)).abs();
            ComponentRigidity {
                theta,
                ell: at.ell,
                ratio,
                d,
                length_gap,
                identity_error: (length_gap - d).abs(),
                slack_bound: 6.0 * (at.s1.len() + 2) as f64 + 6.0 * (at.s2.len() + 2) as f64,
                slack_coords: 3.0 * a.norm(at.p1 - at.p) + 3.0 * a.norm(at.q1 - at.q),
                scaled_budget: 4.0 * ell * eps,
            }
        })
        .collect();

    let argmax = components
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.d.total_cmp(&y.1.d).then(y.0.cmp(&x.0)))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let top = components.get(argmax);
    let max_d = top.map_or(0.0, |c| c.d);
    let scaled = witness.scaled;
    let (budget, budget_covers_slack) = match top {
        None => (FULL_SLACK_BUDGET, false),
        Some(c) if scaled => (c.scaled_budget, c.scaled_budget > c.slack_bound),
        Some(c) => (FULL_SLACK_BUDGET, FULL_SLACK_BUDGET >= c.slack_bound),
    };
    let exceeds_budget = max_d > budget;
    let identity_ok = components.iter().all(|c| c.identity_error <= IDENTITY_TOL);
    Ok(RigidityReport {
        argmax,
        max_d,
        scaled,
        budget,
        exceeds_budget,
        budget_covers_slack,
        identity_ok,
        separated_by_rigidity: exceeds_budget && budget_covers_slack && identity_ok,
        components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact_witness::assemble_for_angles;

    #[test]
    fn same_body_has_no_mismatch() {
        let d = SymmetricBody::disk(256).unwrap();
        let w = assemble_for_angles(&d, &[0.2, 1.0], 20, 0.03, true).unwrap();
        let r = verify_rigidity(&d, &w, &d, LinearMap2::IDENTITY).unwrap();
        assert!(r.components.iter().all(|c| c.d < 1e-12));
        assert!(r.identity_ok);
        assert!(!r.separated_by_rigidity);
    }

    #[test]
    fn identity_holds_for_other_bodies() {
        let d = SymmetricBody::disk(256).unwrap();
        let hex = SymmetricBody::hexagon();
        let w = assemble_for_angles(&d, &[0.0, 0.3, 0.9], 24, 0.03, true).unwrap();
        let t = LinearMap2::new(1.05, 0.1, -0.05, 0.97);
        let r = verify_rigidity(&d, &w, &hex, t).unwrap();
        assert!(r.identity_ok, "{:?}", r.components);
        for c in &r.components {
            assert!(c.slack_coords <= c.slack_bound + 1e-9);
        }
    }
}
