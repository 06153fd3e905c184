use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_translates"))
}

fn workdir(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("translates-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&d).unwrap();
    d
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&Path], extra: &[&str]) -> Output {
    bin().args(args).args(extra).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn bodies(dir: &Path) -> (PathBuf, PathBuf, PathBuf) {
    (
        write(dir, "disk.json", r#"{"type":"disk","segments":256}"#),
        write(dir, "hex.json", r#"{"type":"regular","n":6}"#),
        write(dir, "square.json", r#"{"type":"polygon","vertices":[[1,1],[-1,1],[-1,-1],[1,-1]]}"#),
    )
}

#[test]
fn equivalent_bodies_exit_two() {
    let dir = workdir("equiv");
    let (disk, _, _) = bodies(&dir);
    let out = dir.join("cert.json");
    let o = bin()
        .arg("separate")
        .args([&disk, &disk])
        .args(["--max-level", "4", "--witness", "--json"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(code(&o), 2, "{}", stderr(&o));
    let cert: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(cert["verdict"], "EquivalentUpToTolerance");
    assert!(cert["residual"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn square_is_rejected_with_its_edge() {
    let dir = workdir("square");
    let (_, hex, square) = bodies(&dir);
    let o = bin().args(["witness", "contact"]).args([&square, &hex]).output().unwrap();
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("NotURTC: body A has boundary edge"), "{}", stderr(&o));
}

#[test]
fn bad_input_exits_three() {
    let dir = workdir("bad");
    let odd = write(&dir, "odd.json", r#"{"type":"polygon","vertices":[[1,0],[0,1],[-1,0]]}"#);
    assert_eq!(code(&run(&[Path::new("body"), &odd], &[])), 3);
    let garbage = write(&dir, "garbage.json", "{");
    assert_eq!(code(&run(&[Path::new("body"), &garbage], &[])), 3);
    assert_eq!(code(&run(&[Path::new("body"), &dir.join("missing.json")], &[])), 3);
}

#[test]
fn body_reports_urtc_and_signature() {
    let dir = workdir("body");
    let (_, hex, square) = bodies(&dir);
    let csv = dir.join("sig.csv");
    let o = bin().arg("body").arg(&hex).arg("--signature-csv").arg(&csv).args(["--samples", "12"]).output().unwrap();
    assert_eq!(code(&o), 0);
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["urtc"], true);
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count(), 13);
    let o = bin().arg("body").arg(&square).output().unwrap();
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["urtc"], false);
}

#[test]
fn graph_exports_json_dot_and_svg() {
    let dir = workdir("graph");
    let (_, hex, _) = bodies(&dir);
    let pts = write(&dir, "pts.json", "[[0,0],[2,0],[1,1.7320508075688772],[5,5]]");
    let (json, dot, svg) = (dir.join("g.json"), dir.join("g.dot"), dir.join("g.svg"));
    let o = bin()
        .arg("graph")
        .args([&hex, &pts])
        .args(["--kind", "intersection", "--json"])
        .arg(&json)
        .arg("--dot")
        .arg(&dot)
        .arg("--svg")
        .arg(&svg)
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let g: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(g["graph"]["edges"].as_array().unwrap().len(), 3);
    assert!(fs::read_to_string(&dot).unwrap().contains("0 -- 1;"));
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));

    let re = dir.join("re.svg");
    let o = bin().arg("render").arg(&hex).arg("--graph").arg(&json).arg("--svg").arg(&re).output().unwrap();
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(fs::read(&re).unwrap(), fs::read(&svg).unwrap());
}

#[test]
fn witness_round_trip_verifies_and_reproduces() {
    let dir = workdir("witness");
    let (disk, hex, _) = bodies(&dir);
    let sep = |tag: &str| {
        let (cert, bundle, svg, man) = (
            dir.join(format!("cert-{tag}.json")),
            dir.join(format!("bundle-{tag}.json")),
            dir.join(format!("w-{tag}.svg")),
            dir.join(format!("manifest-{tag}.json")),
        );
        let o = bin()
            .arg("separate")
            .args([&disk, &hex])
            .args(["--max-level", "5", "--witness", "--json"])
            .arg(&cert)
            .arg("--witness-json")
            .arg(&bundle)
            .arg("--svg")
            .arg(&svg)
            .arg("--manifest")
            .arg(&man)
            .output()
            .unwrap();
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        (cert, bundle, svg, man)
    };
    let first = sep("a");
    let second = sep("b");
    for (x, y) in [(&first.0, &second.0), (&first.1, &second.1), (&first.2, &second.2)] {
        assert_eq!(fs::read(x).unwrap(), fs::read(y).unwrap(), "{}", x.display());
    }
    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(&first.3).unwrap()).unwrap();
    assert_eq!(manifest["verdicts"]["separation"], "Separated");
    assert_eq!(manifest["parameters"]["max_level"], 5);

    let o = bin()
        .arg("verify")
        .args([&disk, &hex])
        .arg("--cert")
        .arg(&first.0)
        .arg("--witness")
        .arg(&first.1)
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", stderr(&o));

    let mut bundle: serde_json::Value = serde_json::from_str(&fs::read_to_string(&first.1).unwrap()).unwrap();
    let x = bundle["points"][5][0].as_f64().unwrap();
    bundle["points"][5][0] = serde_json::json!(x + 0.3);
    let tampered = write(&dir, "tampered.json", &bundle.to_string());
    let o = bin()
        .arg("verify")
        .args([&disk, &hex])
        .arg("--cert")
        .arg(&first.0)
        .arg("--witness")
        .arg(&tampered)
        .output()
        .unwrap();
    assert_eq!(code(&o), 4);

    let svg = dir.join("bundle.svg");
    let o = bin().arg("render").arg(&disk).arg("--bundle").arg(&first.1).arg("--svg").arg(&svg).output().unwrap();
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn small_intersection_gadget_passes() {
    let dir = workdir("gadget");
    let (disk, _, square) = bodies(&dir);
    let (json, gadget) = (dir.join("checks.json"), dir.join("gadget.json"));
    let o = bin()
        .args(["witness", "intersection"])
        .arg(&disk)
        .args(["--k", "3", "--perturbations", "5", "--json"])
        .arg(&json)
        .arg("--gadget-json")
        .arg(&gadget)
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let checks: Vec<serde_json::Value> = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert!(checks.iter().all(|c| c["pass"] == true));
    assert!(checks.iter().any(|c| c["check"] == "alpha_3"));
    let g: serde_json::Value = serde_json::from_str(&fs::read_to_string(&gadget).unwrap()).unwrap();
    assert_eq!(g["alpha"].as_array().unwrap().len(), 3);

    let o = bin().args(["witness", "intersection"]).arg(&square).args(["--k", "3"]).output().unwrap();
    assert_eq!(code(&o), 3);
}
