use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const CURV: &str = env!("CARGO_BIN_EXE_curv");

fn run(args: &[&str]) -> Output {
    Command::new(CURV)
        .args(args)
        .env_remove("CURV_THREADS")
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("terminated by a signal")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Runs with `--json <tmp>` and returns the exit code and the parsed report.
fn report(dir: &TempDir, args: &[&str]) -> (i32, Value) {
    let json = dir
        .path()
        .join(format!("report-{}.json", args.join("_").replace('/', "")));
    let mut all = args.to_vec();
    all.extend(["--json", s(&json)]);
    let out = run(&all);
    let text = std::fs::read_to_string(&json)
        .unwrap_or_else(|e| panic!("no report ({e}): {}", String::from_utf8_lossy(&out.stderr)));
    (code(&out), serde_json::from_str(&text).unwrap())
}

fn labels(report: &Value) -> Vec<String> {
    report["witnesses"][0]["labels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l.as_str().unwrap().to_owned())
        .collect()
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let ok = write(&dir, "ok.csv", "3\n0,1,2\n1,0,1\n2,1,0\n");
    assert_eq!(code(&run(&["validate", s(&ok)])), 0);

    let bad = write(&dir, "bad.csv", "3\n0,1,2\n1.5,0,1\n2,1,0\n");
    let out = run(&["validate", s(&bad)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("(0, 1)"));

    let missing = dir.path().join("missing.csv");
    assert_eq!(code(&run(&["validate", s(&missing)])), 3);
    let garbled = write(&dir, "garbled.csv", "three\n");
    assert_eq!(code(&run(&["validate", s(&garbled)])), 3);
    let unknown = write(&dir, "ok.txt", "3\n0,1,2\n1,0,1\n2,1,0\n");
    assert_eq!(code(&run(&["validate", s(&unknown)])), 3);
    assert_eq!(
        code(&run(&["validate", s(&unknown), "--format", "matrix"])),
        0
    );
}

#[test]
fn usage_errors_exit_three() {
    let dir = TempDir::new().unwrap();
    let ok = write(&dir, "ok.csv", "3\n0,1,2\n1,0,1\n2,1,0\n");
    assert_eq!(code(&run(&["certify", s(&ok)])), 3);
    assert_eq!(code(&run(&["certify", s(&ok), "--kappa", "nan"])), 3);
    assert_eq!(
        code(&run(&[
            "certify",
            s(&ok),
            "--kappa",
            "0",
            "--epsilon",
            "-1"
        ])),
        3
    );
    assert_eq!(code(&run(&["frobnicate"])), 3);
}

#[test]
fn tree_holds_with_half_edge_slack() {
    let dir = TempDir::new().unwrap();
    let tree = write(
        &dir,
        "tree.edges",
        "# a star with one long arm\n0 1 1\n0 2 1\n0 3 1\n3 4 1\n4 5 1\n",
    );
    let args = [
        "certify",
        s(&tree),
        "--kappa",
        "0",
        "--direction",
        "upper",
        "--epsilon",
        "0.5",
    ];
    let (c, r) = report(&dir, &args);
    assert_eq!(c, 0);
    assert_eq!(r["verdict"]["holds"], Value::Bool(true));
    assert!(r["epsilon_star_upper"].as_f64().unwrap() <= 0.5);
}

#[test]
fn lp4_fixture_fails_with_the_lifted_witness() {
    let dir = TempDir::new().unwrap();
    for p in ["4", "1.5"] {
        let pts = dir.path().join(format!("l{p}.pts"));
        assert_eq!(
            code(&run(&[
                "counterexample",
                "--p",
                p,
                "--write-fixture",
                s(&pts)
            ])),
            0
        );
        let args = [
            "certify",
            s(&pts),
            "--kappa",
            "0",
            "--direction",
            "upper",
            "--epsilon",
            "0",
        ];
        let (c, r) = report(&dir, &args);
        assert_eq!(c, 1, "p {p}");
        assert_eq!(labels(&r), ["A'", "B", "C"], "p {p}");
        assert!(r["witnesses"][0]["value"].as_f64().unwrap() >= 1e-3);
    }
}

#[test]
fn oversized_triangles_are_skipped_for_positive_kappa() {
    let dir = TempDir::new().unwrap();
    let m = write(
        &dir,
        "big.csv",
        "4\n0,2.5,2.5,1.25\n2.5,0,2.5,1.25\n2.5,2.5,0,1.25\n1.25,1.25,1.25,0\n",
    );
    let (_, r) = report(&dir, &["certify", s(&m), "--kappa", "1"]);
    assert_eq!(r["skipped"].as_u64(), Some(1));
}

#[test]
fn counterexample_reports() {
    let dir = TempDir::new().unwrap();
    for p in ["4", "1.5"] {
        let (c, r) = report(&dir, &["counterexample", "--p", p]);
        assert_eq!(c, 0, "p {p}");
        let w = &r["witnesses"][0];
        assert!(w["r_space"].as_f64().unwrap() > 1.0 + 1e-3);
        assert!((w["r_model"].as_f64().unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(r["verdict"]["statement"], "Curv <= 0 fails");
    }
    let (c, r) = report(&dir, &["counterexample", "--p", "1.5"]);
    assert_eq!(c, 0);
    let a = r["extras"]["points"]["A'"].as_array().unwrap();
    assert_eq!(a[0], a[1]);
    let (c, r) = report(&dir, &["counterexample", "--p", "2"]);
    assert_eq!(c, 0);
    assert_eq!(r["verdict"]["holds"], Value::Bool(true));
    assert!(r["epsilon_star_upper"].as_f64().unwrap().abs() <= 1e-12);
}

#[test]
fn reports_are_deterministic_apart_from_timing() {
    let dir = TempDir::new().unwrap();
    let m = dir.path().join("s.csv");
    assert_eq!(
        code(&run(&[
            "sample",
            "euclidean:dim=2,n=25,seed=3",
            "--out",
            s(&m)
        ])),
        0
    );
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timing_ms");
        v
    };
    for cmd in [
        vec!["certify", s(&m), "--kappa", "0"],
        vec!["defect", s(&m), "--kappa", "-1"],
        vec!["hyperbolicity", s(&m)],
    ] {
        let (_, a) = report(&dir, &cmd);
        let mut threaded = cmd.clone();
        threaded.extend(["--threads", "3"]);
        let (_, b) = report(&dir, &threaded);
        assert_eq!(strip(a), strip(b), "{cmd:?}");
    }
    // the sampler is seeded
    let again = dir.path().join("t.csv");
    run(&["sample", "euclidean:dim=2,n=25,seed=3", "--out", s(&again)]);
    assert_eq!(std::fs::read(&m).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn point_files_choose_their_candidates() {
    let dir = TempDir::new().unwrap();
    let pts = write(&dir, "tri.pts", "p 2\nu 0 0\nv 2 0\nw 1 1.5\n");
    let (c, r) = report(&dir, &["certify", s(&pts), "--kappa", "0"]);
    assert_eq!(c, 0);
    assert_eq!(r["extras"]["candidates"], "circumcenters");
    assert!(r["epsilon_star_upper"].as_f64().unwrap().abs() <= 1e-12);
    // without the circumcenter the best center is a vertex
    let (c, r) = report(
        &dir,
        &["certify", s(&pts), "--kappa", "0", "--candidates", "points"],
    );
    assert_eq!(c, 1);
    assert_eq!(labels(&r), ["u", "v", "w"]);
    let csv = write(&dir, "tri.csv", "3\n0,2,2\n2,0,2\n2,2,0\n");
    assert_eq!(
        code(&run(&[
            "certify",
            s(&csv),
            "--kappa",
            "0",
            "--candidates",
            "circumcenters"
        ])),
        3
    );
}

#[test]
fn defect_writes_plot_data() {
    let dir = TempDir::new().unwrap();
    let g = write(
        &dir,
        "c6.edges",
        "0 1 1\n1 2 1\n2 3 1\n3 4 1\n4 5 1\n5 0 1\n",
    );
    let beta = dir.path().join("beta.csv");
    let hist = dir.path().join("hist.csv");
    let (c, r) = report(
        &dir,
        &[
            "defect",
            s(&g),
            "--betas",
            "0,1,2",
            "--beta-csv",
            s(&beta),
            "--histogram-csv",
            s(&hist),
            "--local-radius",
            "1.5",
        ],
    );
    assert_eq!(c, 0);
    assert_eq!(r["beta_curve"].as_array().unwrap().len(), 3);
    let rows = std::fs::read_to_string(&beta).unwrap();
    assert_eq!(rows.lines().count(), 4);
    assert!(std::fs::read_to_string(&hist).unwrap().lines().count() > 1);
}

#[test]
fn hyperbolicity_of_a_four_cycle() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "c4.edges", "0 1 1\n1 2 1\n2 3 1\n3 0 1\n");
    let (c, r) = report(&dir, &["hyperbolicity", s(&g)]);
    assert_eq!(c, 0);
    assert_eq!(r["delta"].as_f64(), Some(1.0));
    assert_eq!(labels(&r), ["0", "1", "3", "2"]);
}
