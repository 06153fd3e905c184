use std::fmt::Write;

use crate::contact_witness::ContactWitness;
use crate::geometry::{SymmetricBody, Vec2};
use crate::graphs::EmbeddedGraph;
use crate::intersection_witness::RadialGadget;

use super::IoError;

const CANVAS: f64 = 800.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub points: Vec<Vec2>,
    pub closed: bool,
    pub color: String,
    /// Stroke width in pixels.
    pub width: f64,
}

/// Region between `inner·A` and `outer·A` around `center`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Annulus {
    pub center: Vec2,
    pub inner: f64,
    pub outer: f64,
}

/// Everything a rendering shows. Bodies are drawn at 10% opacity at each
/// of `body_centers`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Scene {
    pub title: String,
    pub body: Option<SymmetricBody>,
    pub body_centers: Vec<Vec2>,
    pub points: Vec<Vec2>,
    pub edges: Vec<(usize, usize)>,
    pub polylines: Vec<Polyline>,
    pub annuli: Vec<Annulus>,
}

impl Scene {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.polylines.is_empty() && self.annuli.is_empty() && self.body_centers.is_empty()
    }
}

/// Distinct stroke colour for the cycle `α_j`.
pub fn alpha_color(j: usize) -> String {
    format!("hsl({},70%,45%)", (j * 47) % 360)
}

fn num(x: f64) -> String {
    let x = if x.abs() < 5e-7 { 0.0 } else { x };
    format!("{x:.6}")
}

fn path_data(pts: &[Vec2], closed: bool) -> String {
    let mut d = String::new();
    for (i, p) in pts.iter().enumerate() {
        let _ = write!(d, "{}{} {}", if i == 0 { "M" } else { " L" }, num(p.x), num(p.y));
    }
    if closed {
        d.push_str(" Z");
    }
    d
}

/// Deterministic SVG with six-decimal coordinates and y pointing up.
pub fn render_svg(scene: &Scene) -> Result<String, IoError> {
    if scene.is_empty() {
        return Err(IoError::EmptyScene);
    }
    let r = scene.body.as_ref().map_or(1.0, |b| b.circumradius());
    let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut grow = |p: Vec2, pad: f64| {
        lo = Vec2::new(lo.x.min(p.x - pad), lo.y.min(p.y - pad));
        hi = Vec2::new(hi.x.max(p.x + pad), hi.y.max(p.y + pad));
    };
    scene.points.iter().for_each(|&p| grow(p, 0.0));
    scene.body_centers.iter().for_each(|&p| grow(p, r));
    scene.polylines.iter().flat_map(|l| &l.points).for_each(|&p| grow(p, 0.0));
    scene.annuli.iter().for_each(|a| grow(a.center, a.outer * r));
    let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
    let pad = 0.02 * span;
    let (x0, y0) = (lo.x - pad, lo.y - pad);
    let (w, h) = (hi.x - lo.x + 2.0 * pad, hi.y - lo.y + 2.0 * pad);
    let px = w.max(h) / CANVAS;

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="{} {} {} {}">"#,
        num(CANVAS * w / w.max(h)),
        num(CANVAS * h / w.max(h)),
        num(x0),
        num(-(y0 + h)),
        num(w),
        num(h)
    )
    .unwrap();
    if !scene.title.is_empty() {
        writeln!(s, "<title>{}</title>", scene.title.replace('&', "&amp;").replace('<', "&lt;")).unwrap();
    }
    writeln!(s, r#"<g transform="scale(1,-1)">"#).unwrap();

    if let Some(body) = &scene.body {
        let outline = body.vertices();
        writeln!(s, r##"<g fill="#3060c0" fill-opacity="0.1" stroke="none">"##).unwrap();
        for &c in &scene.body_centers {
            let pts: Vec<Vec2> = outline.iter().map(|&v| v + c).collect();
            writeln!(s, r#"<path d="{}"/>"#, path_data(&pts, true)).unwrap();
        }
        writeln!(s, "</g>").unwrap();
    }
    if !scene.annuli.is_empty() {
        writeln!(
            s,
            r##"<g fill="none" stroke="#808080" stroke-dasharray="{} {}" stroke-width="{}">"##,
            num(4.0 * px),
            num(4.0 * px),
            num(px)
        )
        .unwrap();
        for a in &scene.annuli {
            for radius in [a.inner, a.outer] {
                let pts: Vec<Vec2> = match &scene.body {
                    Some(b) => b.vertices().iter().map(|&v| a.center + v * radius).collect(),
                    None => (0..128)
                        .map(|i| a.center + Vec2::from_angle(i as f64 * std::f64::consts::TAU / 128.0) * radius)
                        .collect(),
                };
                writeln!(s, r#"<path d="{}"/>"#, path_data(&pts, true)).unwrap();
            }
        }
        writeln!(s, "</g>").unwrap();
    }
    if !scene.edges.is_empty() {
        writeln!(s, r##"<g stroke="#404040" stroke-width="{}">"##, num(0.5 * px)).unwrap();
        for &(i, j) in &scene.edges {
            let (a, b) = (scene.points[i], scene.points[j]);
            writeln!(s, r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#, num(a.x), num(a.y), num(b.x), num(b.y)).unwrap();
        }
        writeln!(s, "</g>").unwrap();
    }
    for l in &scene.polylines {
        writeln!(
            s,
            r#"<path d="{}" fill="none" stroke="{}" stroke-width="{}"/>"#,
            path_data(&l.points, l.closed),
            l.color,
            num(l.width * px)
        )
        .unwrap();
    }
    if !scene.points.is_empty() {
        writeln!(s, r#"<g fill="black">"#).unwrap();
        for p in &scene.points {
            writeln!(s, r#"<circle cx="{}" cy="{}" r="{}"/>"#, num(p.x), num(p.y), num(1.5 * px)).unwrap();
        }
        writeln!(s, "</g>").unwrap();
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}

pub fn graph_scene(body: &SymmetricBody, g: &EmbeddedGraph) -> Scene {
    Scene {
        title: format!("{} graph", g.kind.name()),
        body: Some(body.clone()),
        body_centers: g.points.points.clone(),
        points: g.points.points.clone(),
        edges: g.edges.clone(),
        ..Default::default()
    }
}

/// Rings and beams of a contact witness; each beam is traced in red.
pub fn witness_scene(body: &SymmetricBody, w: &ContactWitness) -> Scene {
    let mut scene = graph_scene(body, &w.graph);
    scene.title = format!("contact witness, k = {}", w.k);
    for c in &w.components {
        let beam = &w.all_points.points[c.beam_range()];
        scene.polylines.push(Polyline {
            points: vec![beam[0], beam[beam.len() - 1]],
            closed: false,
            color: "#c03030".to_string(),
            width: 2.0,
        });
    }
    scene
}

/// The nested cycles in grey, the paths in light grey and each `α_j` in
/// its own colour.
pub fn gadget_scene(body: &SymmetricBody, g: &RadialGadget) -> Scene {
    let s0 = g.s0();
    let mut polylines: Vec<Polyline> = (1..=g.base.k)
        .map(|i| Polyline {
            points: g.base.cycle_points(i),
            closed: true,
            color: "#909090".to_string(),
            width: 0.5,
        })
        .collect();
    polylines.extend((0..g.n()).map(|i| Polyline {
        points: vec![s0, g.base.points.points[g.boundary[i]]],
        closed: false,
        color: "#d0d0d0".to_string(),
        width: 0.3,
    }));
    polylines.extend((1..=g.k).map(|j| Polyline {
        points: (0..g.n()).map(|i| g.ray_point(i, j)).collect(),
        closed: true,
        color: alpha_color(j),
        width: 1.5,
    }));
    Scene {
        title: format!("radial gadget, k = {}", g.k),
        body: Some(body.clone()),
        body_centers: vec![s0],
        points: Vec::new(),
        edges: Vec::new(),
        polylines,
        annuli: vec![Annulus {
            center: s0,
            inner: 2.0 * g.k as f64 - 1.0,
            outer: 2.0 * g.k as f64,
        }],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{build_graph, GraphKind, PointSet};

    #[test]
    fn empty_scene_is_an_error() {
        assert!(matches!(render_svg(&Scene::default()), Err(IoError::EmptyScene)));
    }

    #[test]
    fn rendering_is_deterministic() {
        let body = SymmetricBody::hexagon();
        let g = build_graph(
            &body,
            &PointSet::new(vec![Vec2::ZERO, Vec2::new(1.5, 3f64.sqrt() / 2.0)]),
            GraphKind::Contact,
        )
        .unwrap();
        let a = render_svg(&graph_scene(&body, &g)).unwrap();
        let b = render_svg(&graph_scene(&body, &g)).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.contains("fill-opacity=\"0.1\""));
        assert!(a.contains("<line x1=\"0.000000\" y1=\"0.000000\" x2=\"1.500000\""));
    }

    #[test]
    fn alpha_colours_differ() {
        let c: std::collections::HashSet<String> = (1..=8).map(alpha_color).collect();
        assert_eq!(c.len(), 8);
    }
}
