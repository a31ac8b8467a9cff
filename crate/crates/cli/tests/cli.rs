use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use risp_dyn::io::{load_risp, read_curves_csv};
use risp_dyn::{catalog, cis};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_risp-dyn"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str], out: &Path) -> Output {
    bin().args(args).arg("--out").arg(out).output().unwrap()
}

fn read_json(path: PathBuf) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn data_files_match_catalog() {
    for id in catalog::IDS {
        let s = std::fs::read_to_string(data(&format!("{id}.json"))).unwrap();
        let (file_id, r) = load_risp(&s).unwrap();
        assert_eq!(file_id.as_deref(), Some(*id));
        let c = catalog::by_id(id).unwrap();
        assert_eq!(r.kind(), c.kind(), "{id}");
        assert_eq!(r.phi().p().max_diff(c.phi().p()), 0.0, "{id}");
        assert_eq!(r.phi().beta(), c.phi().beta(), "{id}");
        assert!((r.alpha() - c.alpha()).abs() < 1e-15, "{id}");
    }
}

#[test]
fn unstable_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"p":{"bidegree":[1,1],"coeffs":[[[1,0],[-1,0]],[[-1,0],[0,0]]]},"alpha":0}"#,
    )
    .unwrap();
    let o = run(&["analyze", "--input", bad.to_str().unwrap()], &dir.path().join("o"));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    assert!(!dir.path().join("o").exists());
}

#[test]
fn malformed_json_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let o = run(&["validate", "--input", bad.to_str().unwrap()], &dir.path().join("o"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn analyze_requires_simple() {
    let dir = tempfile::tempdir().unwrap();
    for id in ["twisted", "rim21"] {
        let o = run(&["analyze", "--example", id], &dir.path().join(id));
        assert_eq!(o.status.code(), Some(2), "{id}");
    }
}

#[test]
fn frames_beyond_iterations_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["iterate", "--example", "ex21", "--iters", "3", "--frames", "1,5"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn analyze_ex52() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["analyze", "--input", data("ex52.json").to_str().unwrap(), "--dump-roots"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["qalpha.json", "belts.json", "sfpoints.json", "curves.csv", "multipliers.json", "roots.json"] {
        assert!(dir.path().join(f).is_file(), "{f}");
    }
    let belts = read_json(dir.path().join("belts.json"));
    assert_eq!(belts["belts"].as_array().unwrap().len(), 2);
    assert_eq!(belts["bound"], 2);
    assert_eq!(belts["bound_satisfied"], true);

    let sf = read_json(dir.path().join("sfpoints.json"));
    let pts = sf["sf_points"].as_array().unwrap();
    assert_eq!(pts.len(), 2);
    let kinds: Vec<&str> = pts.iter().map(|p| p["crossing"].as_str().unwrap()).collect();
    assert!(kinds.contains(&"single-branch") && kinds.contains(&"two-branch"));
}

#[test]
fn analyze_ex22_reports_vanishing_q() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["analyze", "--example", "ex22"], dir.path());
    assert!(o.status.success());
    let q = read_json(dir.path().join("qalpha.json"));
    assert_eq!(q["is_identically_zero"], true);
    let belts = read_json(dir.path().join("belts.json"));
    assert_eq!(belts["q_identically_zero"], true);
    assert!(belts["belts"].as_array().unwrap().is_empty());
    let csv = std::fs::read_to_string(dir.path().join("curves.csv")).unwrap();
    assert!(read_curves_csv(&csv).unwrap().is_empty());
}

#[test]
fn curves_csv_lies_on_fixed_set() {
    for id in ["ex21", "ex23", "ex51", "ex52"] {
        let dir = tempfile::tempdir().unwrap();
        let o = run(&["analyze", "--example", id, "--samples", "512"], dir.path());
        assert!(o.status.success(), "{id}");
        let rows = read_curves_csv(&std::fs::read_to_string(dir.path().join("curves.csv")).unwrap()).unwrap();
        assert!(!rows.is_empty(), "{id}");
        let r = catalog::by_id(id).unwrap();
        let phi = r.phi();
        let pa = &phi.numerator() - &phi.p().shift(1, 0);
        let scale = phi.p().norm1();
        for row in rows {
            let z2 = cis(row.lambda_angle);
            let bound = 1e-8 * scale * (1.0 + row.z1.norm()).powi(2);
            let res = pa.eval(row.z1, z2).norm();
            assert!(res <= bound, "{id}: residual {res:e} at {:?}", row);
        }
    }
}

#[test]
fn iterate_writes_frames_and_orbit() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &["iterate", "--example", "ex21", "--iters", "4", "--frames", "1,4", "--points-per-line", "50", "--overlay-belts"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["orbit.jsonl", "orbit.csv", "frame_1.svg", "frame_4.svg"] {
        assert!(dir.path().join(f).is_file(), "{f}");
    }
    let jsonl = std::fs::read_to_string(dir.path().join("orbit.jsonl")).unwrap();
    assert_eq!(jsonl.lines().count(), 5);
    let svg = std::fs::read_to_string(dir.path().join("frame_4.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
}

#[test]
fn branch_profile_and_rim_check() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["branch-profile", "--example", "ex51", "--samples", "256"], &dir.path().join("b"));
    assert!(o.status.success());
    let csv = std::fs::read_to_string(dir.path().join("b/psi_modulus.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("t2,abs_psi1,abs_psi2"));

    let o = run(&["rim-check", "--example", "rim21"], &dir.path().join("r"));
    assert!(o.status.success());
    let rim = read_json(dir.path().join("r/rim.json"));
    assert!(rim.is_object());
}
