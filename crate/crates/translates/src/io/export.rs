use std::f64::consts::PI;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::contact_witness::ContactWitness;
use crate::geometry::{LinearMap2, SymmetricBody, Vec2};
use crate::graphs::{EmbeddedGraph, GraphKind};
use crate::intersection_witness::{NestedCycleGadget, RadialGadget};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

impl From<&EmbeddedGraph> for GraphJson {
    fn from(g: &EmbeddedGraph) -> Self {
        GraphJson {
            n: g.n(),
            edges: g.edges.iter().map(|&(i, j)| [i, j]).collect(),
            kind: g.kind.name().to_string(),
            epsilon: g.kind.epsilon(),
        }
    }
}

impl GraphJson {
    pub fn edge_pairs(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|e| (e[0], e[1])).collect()
    }

    pub fn graph_kind(&self) -> Option<GraphKind> {
        match self.kind.as_str() {
            "contact" => Some(GraphKind::Contact),
            "unit_distance" => Some(GraphKind::UnitDistance),
            "intersection" => Some(GraphKind::Intersection),
            "eps_overlap" => self.epsilon.map(GraphKind::EpsOverlap),
            _ => None,
        }
    }
}

/// One component of a contact witness, as indices into the bundle's points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessComponentJson {
    pub theta: f64,
    pub ring: Vec<usize>,
    pub beam: Vec<usize>,
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
    pub z1: usize,
    pub z2: usize,
    pub t: Vec2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessBundle {
    pub k: i64,
    pub epsilon: f64,
    pub scaled: bool,
    /// The map `T` the witness is judged against.
    pub map: LinearMap2,
    pub components: Vec<WitnessComponentJson>,
    pub points: Vec<Vec2>,
    pub graph: GraphJson,
}

impl WitnessBundle {
    pub fn new(w: &ContactWitness, map: LinearMap2) -> Self {
        let components = w
            .components
            .iter()
            .map(|c| {
                let a = &c.attached;
                let mut at = c.offset;
                let mut take = |n: usize| {
                    let r: Vec<usize> = (at..at + n).collect();
                    at += n;
                    r
                };
                let ring = take(a.ring.len());
                let beam = take(a.beam.points.len());
                let s1 = take(a.s1.len());
                let s2 = take(a.s2.len());
                WitnessComponentJson {
                    theta: c.theta,
                    ring,
                    beam,
                    s1,
                    s2,
                    z1: at,
                    z2: at + 1,
                    t: c.translation,
                }
            })
            .collect();
        WitnessBundle {
            k: w.k,
            epsilon: w.epsilon,
            scaled: w.scaled,
            map,
            components,
            points: w.all_points.points.clone(),
            graph: GraphJson::from(&w.graph),
        }
    }
}

/// Points plus the named index sets of an intersection gadget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GadgetJson {
    pub k: usize,
    pub points: Vec<Vec2>,
    pub s0: usize,
    pub sigma: Vec<Vec<usize>>,
    pub kappa: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pi: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alpha: Vec<Vec<usize>>,
}

impl From<&NestedCycleGadget> for GadgetJson {
    fn from(g: &NestedCycleGadget) -> Self {
        GadgetJson {
            k: g.k,
            points: g.points.points.clone(),
            s0: g.s0,
            sigma: g.cycles.clone(),
            kappa: g.tails.clone(),
            pi: Vec::new(),
            alpha: Vec::new(),
        }
    }
}

impl From<&RadialGadget> for GadgetJson {
    fn from(g: &RadialGadget) -> Self {
        GadgetJson {
            k: g.k,
            points: g.points().points,
            pi: (0..g.n()).map(|i| g.path(i)).collect(),
            alpha: (1..=g.k).map(|j| g.alpha(j)).collect(),
            ..GadgetJson::from(&g.base)
        }
    }
}

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationJson {
    pub check: String,
    pub pass: bool,
    pub worst_case: f64,
    pub location: String,
}

impl VerificationJson {
    pub fn new(check: impl Into<String>, pass: bool, worst_case: f64, location: impl Into<String>) -> Self {
        VerificationJson {
            check: check.into(),
            pass,
            worst_case,
            location: location.into(),
        }
    }
}

/// Undirected DOT with fixed positions (`neato -n` reproduces the drawing).
pub fn graph_to_dot(g: &EmbeddedGraph) -> String {
    let mut s = String::new();
    writeln!(s, "graph {} {{", g.kind.name()).unwrap();
    writeln!(s, "  node [shape=point];").unwrap();
    for (i, p) in g.points.points.iter().enumerate() {
        writeln!(s, "  {i} [pos=\"{:.6},{:.6}!\"];", p.x, p.y).unwrap();
    }
    for &(i, j) in &g.edges {
        writeln!(s, "  {i} -- {j};").unwrap();
    }
    s.push_str("}\n");
    s
}

/// `theta,rho` rows for `samples` equally spaced angles in `[0, π)`.
pub fn signature_csv(body: &SymmetricBody, samples: usize) -> String {
    let mut s = String::from("theta,rho\n");
    for i in 0..samples {
        let t = i as f64 * PI / samples as f64;
        writeln!(s, "{t},{}", body.signature(t)).unwrap();
    }
    s
}
