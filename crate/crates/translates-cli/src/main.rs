//! `translates`: bodies, graphs, separation certificates and witnesses from
//! the command line.
//!
//! Exit codes: 0 success, 2 negative verdict, 3 input error, 4 failed
//! verification.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use translates::contact_witness::{AngleSelection, WitnessOptions, DEFAULT_SCALED_K};
use translates::geometry::{SymmetricBody, Vec2};
use translates::graphs::{build_graph, GraphKind, PointSet};
use translates::intersection_witness::{
    build_assembly, build_radial_with, canonical_centers, extract_overlap, perturbation_trials, refine_to_contact,
    verify_alpha, verify_center_bounds, verify_cross_edges, verify_nesting, verify_triangle_free, RadialGadget,
    TailPolicy, DEPTH_NOTE,
};
use translates::io::{
    gadget_scene, graph_scene, graph_to_dot, load_body_with_info, read_json, render_svg, run_pipeline_separate,
    signature_csv, to_json, verify_bundle, verify_certificate, witness_scene, write_json, write_text, GadgetJson,
    GraphJson, IoError, PipelineOptions, RunManifest, VerificationJson, WitnessBundle,
};
use translates::separation::{FitOptions, SeparationCertificate, Verdict, DEFAULT_MARGIN, DEFAULT_MAX_LEVEL, DEFAULT_SEEDS};

#[derive(Debug)]
enum Failure {
    Negative(String),
    Input(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Negative(_) => 2,
            Failure::Input(_) => 3,
            Failure::Verification(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Negative(m) | Failure::Input(m) | Failure::Verification(m) => m,
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Stage { stage, .. } if stage != "separation" => Failure::Verification(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type CliResult = Result<(), Failure>;

#[derive(Parser, Debug)]
#[command(name = "translates", version, about = "Graphs of translates of planar symmetric convex bodies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct BodyFlags {
    /// Boundary tolerance for membership and contact tests.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Segment count used to discretize disks and ellipses.
    #[arg(long, global = true)]
    segments: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct Outputs {
    /// Write the main JSON result here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Record inputs, parameters, outputs, timings and verdicts.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Copy)]
struct SeparationFlags {
    #[arg(long, default_value_t = DEFAULT_MAX_LEVEL)]
    max_level: u32,
    #[arg(long, default_value_t = DEFAULT_MARGIN)]
    margin: f64,
    /// Random restarts of the map fit.
    #[arg(long, default_value_t = DEFAULT_SEEDS)]
    seeds: usize,
}

#[derive(Args, Debug, Clone, Copy)]
struct ContactFlags {
    /// Ring size of the scaled witness.
    #[arg(long, default_value_t = DEFAULT_SCALED_K)]
    k: i64,
    /// Build the scaled witness (the default).
    #[arg(long, conflicts_with = "full")]
    scaled: bool,
    /// Build the full-size witness with ring size ⌈180/ε⌉.
    #[arg(long)]
    full: bool,
    /// Attach a beam at every certificate angle instead of the top three.
    #[arg(long)]
    all_angles: bool,
}

impl ContactFlags {
    fn options(&self) -> WitnessOptions {
        WitnessOptions {
            k_override: (!self.full).then_some(self.k),
            angles: if self.all_angles {
                AngleSelection::Full
            } else {
                WitnessOptions::default().angles
            },
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a body and report URTC and its signature.
    Body {
        body: PathBuf,
        #[command(flatten)]
        flags: BodyFlags,
        /// Write `theta,rho` samples to this CSV file.
        #[arg(long)]
        signature_csv: Option<PathBuf>,
        #[arg(long, default_value_t = 720)]
        samples: usize,
        #[command(flatten)]
        out: Outputs,
    },
    /// Build a graph of translates on a point set.
    Graph {
        body: PathBuf,
        /// JSON array of `[x, y]` centres.
        points: PathBuf,
        #[command(flatten)]
        flags: BodyFlags,
        #[arg(long, value_enum, default_value_t = KindArg::Contact)]
        kind: KindArg,
        /// ε for `--kind eps-overlap`.
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[command(flatten)]
        out: Outputs,
    },
    /// Search for a direction set separating two bodies' signatures.
    Separate {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        flags: BodyFlags,
        #[command(flatten)]
        sep: SeparationFlags,
        /// Also build and check a contact witness.
        #[arg(long)]
        witness: bool,
        #[command(flatten)]
        contact: ContactFlags,
        /// Where to write the witness bundle.
        #[arg(long)]
        witness_json: Option<PathBuf>,
        #[command(flatten)]
        out: Outputs,
    },
    /// Witness constructions.
    #[command(subcommand)]
    Witness(WitnessCommand),
    /// Re-check a certificate and optionally a witness bundle.
    Verify {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        flags: BodyFlags,
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        witness: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MARGIN)]
        margin: f64,
        #[command(flatten)]
        out: Outputs,
    },
    /// Draw a graph, witness bundle or radial gadget as SVG.
    Render {
        body: PathBuf,
        #[command(flatten)]
        flags: BodyFlags,
        /// Graph file written by `graph`.
        #[arg(long, group = "scene")]
        graph: Option<PathBuf>,
        /// Witness bundle written by `separate` or `witness contact`.
        #[arg(long, group = "scene")]
        bundle: Option<PathBuf>,
        /// Build and draw the radial gadget of this size.
        #[arg(long, group = "scene")]
        gadget: Option<usize>,
        #[arg(long)]
        svg: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum WitnessCommand {
    /// Contact-graph witness that separates A from B.
    Contact {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        flags: BodyFlags,
        #[command(flatten)]
        sep: SeparationFlags,
        #[command(flatten)]
        contact: ContactFlags,
        /// Where to write the certificate.
        #[arg(long)]
        cert: Option<PathBuf>,
        /// Where to write the rigidity report.
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        out: Outputs,
    },
    /// Nested-cycle and radial gadgets, optionally assembled over a host.
    Intersection {
        a: PathBuf,
        #[command(flatten)]
        flags: BodyFlags,
        #[arg(long, default_value_t = 8)]
        k: usize,
        #[arg(long, value_enum, default_value_t = TailArg::Minimal)]
        tails: TailArg,
        /// Perturbed drawings to check.
        #[arg(long, default_value_t = 100)]
        perturbations: usize,
        #[arg(long, default_value_t = 0.01)]
        radius: f64,
        #[arg(long, default_value_t = 1)]
        rng_seed: u64,
        /// Host centres (JSON array of `[x, y]`) whose contact graph is assembled.
        #[arg(long)]
        host: Option<PathBuf>,
        /// Increasing sizes for the contact refinement, e.g. `8,16,32`.
        #[arg(long, value_delimiter = ',')]
        schedule: Vec<usize>,
        /// Where to write the gadget's points and index sets.
        #[arg(long)]
        gadget_json: Option<PathBuf>,
        #[command(flatten)]
        out: Outputs,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum KindArg {
    Contact,
    UnitDistance,
    Intersection,
    EpsOverlap,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum TailArg {
    Minimal,
    Certified,
}

/// Points and a graph on them, as written by `graph`.
#[derive(Debug, Serialize, Deserialize)]
struct GraphFile {
    points: Vec<Vec2>,
    graph: GraphJson,
}

#[derive(Debug, Serialize)]
struct BodyReport {
    vertices: Vec<Vec2>,
    segments: Option<usize>,
    tolerance: f64,
    area: f64,
    inradius: f64,
    circumradius: f64,
    urtc: bool,
    max_edge_norm: f64,
    violating_edge: Option<(Vec2, Vec2)>,
}

fn load(path: &Path, flags: BodyFlags, manifest: &mut RunManifest) -> Result<SymmetricBody, Failure> {
    manifest.input(path);
    Ok(load_body_with_info(path, flags.segments, flags.tolerance)?.body)
}

fn load_points(path: &Path, manifest: &mut RunManifest) -> Result<PointSet, Failure> {
    manifest.input(path);
    Ok(PointSet::new(read_json::<Vec<Vec2>>(path)?))
}

/// Writes `value` to `--json` or stdout.
fn emit<T: Serialize>(out: &Outputs, manifest: &mut RunManifest, value: &T) -> CliResult {
    match &out.json {
        Some(p) => {
            write_json(p, value)?;
            manifest.output(p);
        }
        None => print!("{}", to_json(value)),
    }
    Ok(())
}

fn write_file(path: &Path, text: &str, manifest: &mut RunManifest) -> CliResult {
    write_text(path, text)?;
    manifest.output(path);
    Ok(())
}

fn finish(out: &Outputs, manifest: &RunManifest) -> CliResult {
    if let Some(p) = &out.manifest {
        manifest.write(p)?;
    }
    Ok(())
}

fn body_params(manifest: &mut RunManifest, flags: BodyFlags) {
    manifest.param("tolerance", flags.tolerance).param("segments", flags.segments);
}

fn cmd_body(body: &Path, flags: BodyFlags, csv: Option<&Path>, samples: usize, out: &Outputs) -> CliResult {
    let mut m = RunManifest::new("body");
    body_params(&mut m, flags);
    m.input(body);
    let built = load_body_with_info(body, flags.segments, flags.tolerance)?;
    let b = &built.body;
    let u = b.has_urtc();
    let report = BodyReport {
        vertices: b.vertices().to_vec(),
        segments: built.segments,
        tolerance: b.tolerance(),
        area: b.area(),
        inradius: b.inradius(),
        circumradius: b.circumradius(),
        urtc: u.holds,
        max_edge_norm: u.max_edge_norm,
        violating_edge: u.violating_edge,
    };
    m.verdict("urtc", u.holds.to_string());
    if let Some(p) = csv {
        m.param("samples", samples);
        write_file(p, &signature_csv(b, samples), &mut m)?;
    }
    emit(out, &mut m, &report)?;
    finish(out, &m)
}

fn cmd_graph(
    body: &Path,
    points: &Path,
    flags: BodyFlags,
    kind: KindArg,
    epsilon: Option<f64>,
    dot: Option<&Path>,
    out: &Outputs,
) -> CliResult {
    let mut m = RunManifest::new("graph");
    body_params(&mut m, flags);
    let b = load(body, flags, &mut m)?;
    let pts = load_points(points, &mut m)?;
    let kind = match kind {
        KindArg::Contact => GraphKind::Contact,
        KindArg::UnitDistance => GraphKind::UnitDistance,
        KindArg::Intersection => GraphKind::Intersection,
        KindArg::EpsOverlap => {
            GraphKind::EpsOverlap(epsilon.ok_or_else(|| Failure::Input("--kind eps-overlap needs --epsilon".into()))?)
        }
    };
    m.param("kind", kind.name()).param("epsilon", kind.epsilon());
    let t = Instant::now();
    let g = build_graph(&b, &pts, kind).map_err(|e| Failure::Input(e.to_string()))?;
    m.timing("build", t.elapsed());
    m.verdict("edges", g.edges.len().to_string());
    if let Some(p) = dot {
        write_file(p, &graph_to_dot(&g), &mut m)?;
    }
    if let Some(p) = &out.svg {
        write_file(p, &render_svg(&graph_scene(&b, &g))?, &mut m)?;
    }
    emit(
        out,
        &mut m,
        &GraphFile {
            points: g.points.points.clone(),
            graph: GraphJson::from(&g),
        },
    )?;
    finish(out, &m)
}

fn pipeline_options(sep: SeparationFlags, contact: Option<ContactFlags>) -> PipelineOptions {
    PipelineOptions {
        max_level: sep.max_level,
        margin: sep.margin,
        fit: FitOptions {
            seeds: sep.seeds,
            ..FitOptions::default()
        },
        witness: contact.map(|c| c.options()),
    }
}

fn separation_params(m: &mut RunManifest, flags: BodyFlags, sep: SeparationFlags, contact: Option<ContactFlags>) {
    body_params(m, flags);
    let fit = FitOptions::default();
    m.param("max_level", sep.max_level)
        .param("margin", sep.margin)
        .param("seeds", sep.seeds)
        .param("rng_seed", fit.rng_seed)
        .param("iterations", fit.iterations);
    if let Some(c) = contact {
        m.param("witness", c.options());
    }
}

/// Shared by `separate --witness` and `witness contact`.
#[allow(clippy::too_many_arguments)]
fn separate_and_witness(
    command: &str,
    a: &Path,
    b: &Path,
    flags: BodyFlags,
    sep: SeparationFlags,
    contact: Option<ContactFlags>,
    cert_out: Option<&Path>,
    bundle_out: Option<&Path>,
    report_out: Option<&Path>,
    out: &Outputs,
) -> CliResult {
    let mut m = RunManifest::new(command);
    separation_params(&mut m, flags, sep, contact);
    let body_a = load(a, flags, &mut m)?;
    let body_b = load(b, flags, &mut m)?;
    let t = Instant::now();
    let run = run_pipeline_separate(&body_a, &body_b, &pipeline_options(sep, contact))?;
    m.timing("pipeline", t.elapsed());
    let cert = &run.certificate;
    m.verdict("separation", format!("{:?}", cert.verdict));
    eprintln!(
        "verdict {:?}, residual {:.3e}, epsilon {:.3e}, level {}",
        cert.verdict, cert.residual, cert.epsilon, cert.level
    );

    let result = match (&run.witness, &run.witness_skipped) {
        _ if cert.verdict == Verdict::EquivalentUpToTolerance => Err(Failure::Negative(format!(
            "bodies are equivalent up to tolerance (residual {:e})",
            cert.residual
        ))),
        (None, Some(msg)) => Err(Failure::Input(msg.clone())),
        (Some(w), _) => {
            let rig = run.rigidity.as_ref().expect("rigidity accompanies a witness");
            m.verdict("rigidity", if rig.separated_by_rigidity { "separated" } else { "not_separated" });
            m.verdict("beam_identity", if rig.identity_ok { "ok" } else { "failed" });
            eprintln!(
                "witness k = {}, {} points, max d = {:.4}, budget {:.4}",
                w.k,
                w.all_points.len(),
                rig.max_d,
                rig.budget
            );
            let bundle = WitnessBundle::new(w, cert.map);
            if let Some(p) = bundle_out {
                write_json(p, &bundle)?;
                m.output(p);
            }
            if let Some(p) = report_out {
                write_json(p, rig)?;
                m.output(p);
            }
            if let Some(p) = &out.svg {
                write_file(p, &render_svg(&witness_scene(&body_a, w))?, &mut m)?;
            }
            if rig.identity_ok {
                Ok(())
            } else {
                Err(Failure::Verification("beam length identity failed".into()))
            }
        }
        (None, None) => Ok(()),
    };

    if let Some(p) = cert_out {
        write_json(p, cert)?;
        m.output(p);
    }
    match (command, &run.witness) {
        ("witness contact", Some(w)) => emit(out, &mut m, &WitnessBundle::new(w, cert.map))?,
        ("witness contact", None) => {}
        _ => emit(out, &mut m, cert)?,
    }
    finish(out, &m)?;
    result
}

fn check(name: &str, pass: bool, worst: f64, location: impl Into<String>) -> VerificationJson {
    VerificationJson::new(name, pass, worst, location)
}

fn gadget_checks(body: &SymmetricBody, g: &RadialGadget, trials: usize, radius: f64, seed: u64) -> Result<Vec<VerificationJson>, Failure> {
    let verr = |e: translates::intersection_witness::IntersectionError| Failure::Verification(e.to_string());
    let p_graph = g.base.intersection_graph(body).map_err(verr)?;
    let mut out = vec![check(
        "nested_triangle_free",
        verify_triangle_free(&p_graph),
        p_graph.edges.len() as f64,
        format!("{} vertices", p_graph.n()),
    )];
    let nest = verify_nesting(&g.base);
    out.push(check(
        "nesting",
        nest.pass,
        nest.failures.len() as f64,
        format!("levels {}, failures {:?}", nest.levels, nest.failures),
    ));
    let (worst_i, worst_d) = g.depths.iter().copied().enumerate().min_by_key(|&(_, d)| d).unwrap_or((0, 0));
    out.push(check(
        "path_depth",
        worst_d >= 2 * g.k,
        worst_d as f64,
        format!("path {worst_i}; {DEPTH_NOTE}"),
    ));
    let canonical = translates::intersection_witness::canonical_drawing(g, g.k).map_err(verr)?;
    for j in 3..=g.k {
        let r = verify_alpha(g, &canonical, body, j).map_err(verr)?;
        out.push(check(
            &format!("alpha_{j}"),
            r.pass,
            r.max_edge_norm,
            format!(
                "radius [{:.6}, {:.6}] in [{}, {}], winding {}",
                r.min_radius, r.max_radius, r.annulus.0, r.annulus.1, r.winding
            ),
        ));
    }
    if trials > 0 {
        let s = perturbation_trials(g, body, trials, radius, seed).map_err(verr)?;
        out.push(check(
            "perturbations",
            s.pass,
            s.min_inner_margin,
            format!(
                "{} trials, {} resamples, smallest radius {}, failures {:?}",
                s.trials, s.resamples, s.smallest_radius_used, s.failures
            ),
        ));
    }
    Ok(out)
}

fn assembly_checks(body: &SymmetricBody, host_pts: &PointSet, k: usize, schedule: &[usize]) -> Result<Vec<VerificationJson>, Failure> {
    let verr = |e: translates::intersection_witness::IntersectionError| Failure::Verification(e.to_string());
    let host = build_graph(body, host_pts, GraphKind::Contact).map_err(|e| Failure::Input(e.to_string()))?;
    let asm = build_assembly(body, &host, k).map_err(|e| Failure::Input(e.to_string()))?;
    let drawings = asm.canonical_drawings(translates::intersection_witness::scan_levels(k)).map_err(verr)?;
    let cross = verify_cross_edges(&asm, body, &drawings).map_err(verr)?;
    let mut out = vec![check(
        "cross_edges",
        cross.pass,
        cross.min_level_sum.map_or(f64::INFINITY, |s| s as f64),
        format!(
            "{} edges, floor {}, violations {}, host edges linked {:?}",
            cross.cross_edges,
            cross.floor,
            cross.violations.len(),
            cross.host_edges_linked
        ),
    )];
    let centers = asm.centers.clone();
    let cr = verify_center_bounds(&asm, &centers, body);
    out.push(check(
        "center_bounds",
        cr.pass,
        cr.max_adjacent,
        format!("[{}, {}], min {:.6} at {:?}", cr.lower, cr.upper, cr.min_distance, cr.min_pair),
    ));
    let real = extract_overlap(&asm, &centers, body).map_err(verr)?;
    out.push(check(
        "overlap_realization",
        true,
        real.min_distance,
        format!("epsilon {}, floor {}", real.epsilon, real.floor),
    ));
    if !schedule.is_empty() {
        let rep = refine_to_contact(body, &host, schedule, &|kk| canonical_centers(&host.points, kk)).map_err(verr)?;
        let last = rep.steps.last().map_or(0.0, |s| s.min_distance);
        out.push(check(
            "refinement",
            rep.monotone && rep.bounded && rep.contains_host,
            last,
            format!(
                "schedule {:?}, distances {:?}",
                schedule,
                rep.steps.iter().map(|s| s.min_distance).collect::<Vec<_>>()
            ),
        ));
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn cmd_intersection(
    a: &Path,
    flags: BodyFlags,
    k: usize,
    tails: TailArg,
    trials: usize,
    radius: f64,
    seed: u64,
    host: Option<&Path>,
    schedule: &[usize],
    gadget_json: Option<&Path>,
    out: &Outputs,
) -> CliResult {
    let mut m = RunManifest::new("witness intersection");
    body_params(&mut m, flags);
    m.param("k", k)
        .param("tails", format!("{tails:?}").to_lowercase())
        .param("perturbations", trials)
        .param("radius", radius)
        .param("rng_seed", seed)
        .param("schedule", schedule);
    let body = load(a, flags, &mut m)?;
    if !body.has_urtc().holds {
        return Err(Failure::Input(format!("NotURTC: body {} does not have URTC", a.display())));
    }
    let policy = match tails {
        TailArg::Minimal => TailPolicy::Minimal,
        TailArg::Certified => TailPolicy::Certified,
    };
    let t = Instant::now();
    let g = build_radial_with(&body, k, policy).map_err(|e| Failure::Input(e.to_string()))?;
    m.timing("build", t.elapsed());
    eprintln!("radial gadget k = {}, k' = {}, {} points", g.k, g.k_prime, g.len());

    let t = Instant::now();
    let mut checks = gadget_checks(&body, &g, trials, radius, seed)?;
    m.timing("gadget_checks", t.elapsed());
    if let Some(h) = host {
        let pts = load_points(h, &mut m)?;
        let t = Instant::now();
        checks.extend(assembly_checks(&body, &pts, k, schedule)?);
        m.timing("assembly_checks", t.elapsed());
    }
    for c in &checks {
        eprintln!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.check, c.location);
        m.verdict(&c.check, if c.pass { "pass" } else { "fail" });
    }
    if let Some(p) = gadget_json {
        write_json(p, &GadgetJson::from(&g))?;
        m.output(p);
    }
    if let Some(p) = &out.svg {
        write_file(p, &render_svg(&gadget_scene(&body, &g))?, &mut m)?;
    }
    emit(out, &mut m, &checks)?;
    finish(out, &m)?;
    match checks.iter().find(|c| !c.pass) {
        Some(c) => Err(Failure::Verification(format!("check {} failed", c.check))),
        None => Ok(()),
    }
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    certificate: translates::io::CertificateCheck,
    #[serde(skip_serializing_if = "Option::is_none")]
    bundle: Option<translates::io::BundleCheck>,
    pass: bool,
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(a: &Path, b: &Path, flags: BodyFlags, cert: &Path, witness: Option<&Path>, margin: f64, out: &Outputs) -> CliResult {
    let mut m = RunManifest::new("verify");
    body_params(&mut m, flags);
    m.param("margin", margin);
    let body_a = load(a, flags, &mut m)?;
    let body_b = load(b, flags, &mut m)?;
    m.input(cert);
    let c: SeparationCertificate = read_json(cert)?;
    let cc = verify_certificate(&body_a, &body_b, &c, margin)?;
    let bundle = match witness {
        Some(p) => {
            m.input(p);
            let wb: WitnessBundle = read_json(p)?;
            Some(verify_bundle(&wb, &body_a, &body_b)?)
        }
        None => None,
    };
    let pass = cc.pass && bundle.as_ref().is_none_or(|b| b.pass);
    m.verdict("verify", if pass { "pass" } else { "fail" });
    emit(
        out,
        &mut m,
        &VerifyReport {
            certificate: cc,
            bundle,
            pass,
        },
    )?;
    finish(out, &m)?;
    if pass {
        Ok(())
    } else {
        Err(Failure::Verification("verification failed".into()))
    }
}

fn cmd_render(body: &Path, flags: BodyFlags, graph: Option<&Path>, bundle: Option<&Path>, gadget: Option<usize>, svg: &Path) -> CliResult {
    let b = load_body_with_info(body, flags.segments, flags.tolerance)?.body;
    let scene = if let Some(p) = graph {
        let f: GraphFile = read_json(p)?;
        let kind = f
            .graph
            .graph_kind()
            .ok_or_else(|| Failure::Input(format!("unknown graph kind {:?}", f.graph.kind)))?;
        let g = translates::graphs::EmbeddedGraph {
            points: PointSet::new(f.points),
            edges: f.graph.edge_pairs(),
            kind,
        };
        graph_scene(&b, &g)
    } else if let Some(p) = bundle {
        let wb: WitnessBundle = read_json(p)?;
        let mut scene = translates::io::Scene {
            title: format!("contact witness, k = {}", wb.k),
            body: Some(b.clone()),
            body_centers: wb.points.clone(),
            points: wb.points.clone(),
            edges: wb.graph.edge_pairs(),
            ..Default::default()
        };
        for c in &wb.components {
            if let (Some(&first), Some(&last)) = (c.beam.first(), c.beam.last()) {
                scene.polylines.push(translates::io::Polyline {
                    points: vec![wb.points[first], wb.points[last]],
                    closed: false,
                    color: "#c03030".to_string(),
                    width: 2.0,
                });
            }
        }
        scene
    } else if let Some(k) = gadget {
        let g = build_radial_with(&b, k, TailPolicy::Minimal).map_err(|e| Failure::Input(e.to_string()))?;
        gadget_scene(&b, &g)
    } else {
        return Err(Failure::Input("render needs one of --graph, --bundle or --gadget".into()));
    };
    write_text(svg, &render_svg(&scene)?)?;
    Ok(())
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Body {
            body,
            flags,
            signature_csv,
            samples,
            out,
        } => cmd_body(&body, flags, signature_csv.as_deref(), samples, &out),
        Command::Graph {
            body,
            points,
            flags,
            kind,
            epsilon,
            dot,
            out,
        } => cmd_graph(&body, &points, flags, kind, epsilon, dot.as_deref(), &out),
        Command::Separate {
            a,
            b,
            flags,
            sep,
            witness,
            contact,
            witness_json,
            out,
        } => separate_and_witness(
            "separate",
            &a,
            &b,
            flags,
            sep,
            witness.then_some(contact),
            None,
            witness_json.as_deref(),
            None,
            &out,
        ),
        Command::Witness(WitnessCommand::Contact {
            a,
            b,
            flags,
            sep,
            contact,
            cert,
            report,
            out,
        }) => separate_and_witness(
            "witness contact",
            &a,
            &b,
            flags,
            sep,
            Some(contact),
            cert.as_deref(),
            None,
            report.as_deref(),
            &out,
        ),
        Command::Witness(WitnessCommand::Intersection {
            a,
            flags,
            k,
            tails,
            perturbations,
            radius,
            rng_seed,
            host,
            schedule,
            gadget_json,
            out,
        }) => cmd_intersection(
            &a,
            flags,
            k,
            tails,
            perturbations,
            radius,
            rng_seed,
            host.as_deref(),
            &schedule,
            gadget_json.as_deref(),
            &out,
        ),
        Command::Verify {
            a,
            b,
            flags,
            cert,
            witness,
            margin,
            out,
        } => cmd_verify(&a, &b, flags, &cert, witness.as_deref(), margin, &out),
        Command::Render {
            body,
            flags,
            graph,
            bundle,
            gadget,
            svg,
        } => cmd_render(&body, flags, graph.as_deref(), bundle.as_deref(), gadget, &svg),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.message());
            ExitCode::from(f.code())
        }
    }
}
