use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const PATH10: &str =
    r#"{"format": 1, "type": "graph", "vertices": [0, 1], "edges": [[0, 1, 10.0]]}"#;
const TRIPOD: &str = r#"{"format": 1, "type": "graph", "vertices": [0, 1, 2, 3], "edges": [[0, 1, 2.0], [0, 2, 3.0], [0, 3, 4.0]]}"#;
const C4: &str = r#"{"format": 1, "type": "graph", "vertices": [0, 1, 2, 3],
    "edges": [[0, 1, 1.0], [1, 2, 1.0], [2, 3, 1.0], [3, 0, 1.0]]}"#;

fn hypflow(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypflow"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn delta_of_tripod_and_four_cycle() {
    let dir = TempDir::new().unwrap();
    let tripod = file(&dir, "tripod.json", TRIPOD);
    let c4 = file(&dir, "c4.json", C4);
    let t = json(&hypflow(
        dir.path(),
        &["delta", "--space", tripod.to_str().unwrap(), "--exact"],
    ));
    assert_eq!(t["delta_hat"], 0.0);
    let c = json(&hypflow(
        dir.path(),
        &["delta", "--space", c4.to_str().unwrap(), "--exact"],
    ));
    assert_eq!(c["delta_hat"], 1.0);
    assert_eq!(c["format"], 1);
}

#[test]
fn delta_is_deterministic_and_writes_out() {
    let dir = TempDir::new().unwrap();
    let args = [
        "delta",
        "--space",
        "halfplane",
        "--box",
        "-5,5,0.1,5",
        "--samples",
        "200",
        "--seed",
        "42",
    ];
    let a = hypflow(dir.path(), &args);
    let b = hypflow(dir.path(), &args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let est = json(&a);
    assert!(est["delta_hat"].as_f64().unwrap() <= std::f64::consts::LN_2 + 1e-9);

    let out = dir.path().join("d.json");
    let c = hypflow(
        dir.path(),
        &[&args[..], &["--out", out.to_str().unwrap()]].concat(),
    );
    assert!(c.status.success() && c.stdout.is_empty());
    assert_eq!(fs::read(&out).unwrap(), a.stdout);
}

#[test]
fn delta_rejects_bad_input() {
    let dir = TempDir::new().unwrap();
    let broken = file(
        &dir,
        "broken.json",
        r#"{"format": 1, "type": "graph", "vertices": [0, 2], "edges": []}"#,
    );
    assert_eq!(
        hypflow(dir.path(), &["delta", "--space", broken.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        hypflow(dir.path(), &["delta", "--space", "missing.json"])
            .status
            .code(),
        Some(2)
    );
    let out = hypflow(
        dir.path(),
        &["delta", "--space", "halfplane", "--box", "1,0,1,2"],
    );
    assert_eq!(out.status.code(), Some(2));
    let v2 = file(&dir, "v2.json", r#"{"format": 2, "type": "halfplane"}"#);
    assert_eq!(
        hypflow(dir.path(), &["delta", "--space", v2.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn prox_on_a_path() {
    let dir = TempDir::new().unwrap();
    let path = file(&dir, "path.json", PATH10);
    let space = path.to_str().unwrap();
    let objective = r#"{"type": "distance", "p": {"vertex": 0}}"#;
    let x = r#"{"edge": [0, 1], "offset": 3.0}"#;
    let r = json(&hypflow(
        dir.path(),
        &[
            "prox",
            "--space",
            space,
            "--objective",
            objective,
            "--x",
            x,
            "--tau",
            "1",
        ],
    ));
    assert_eq!(r["status"], "accepted");
    assert!(
        (r["y"]["offset"].as_f64().unwrap() - 2.0).abs() < 1e-9,
        "{r}"
    );
    assert!((r["moreau_value"].as_f64().unwrap() - 2.5).abs() < 1e-9);

    let r = json(&hypflow(
        dir.path(),
        &[
            "prox",
            "--space",
            space,
            "--objective",
            objective,
            "--x",
            x,
            "--tau",
            "100",
        ],
    ));
    assert_eq!(r["y"], serde_json::json!({"vertex": 0}));

    let obj_file = file(
        &dir,
        "f.json",
        r#"{"format": 1, "type": "distance", "p": {"vertex": 0}, "a": 1.0}"#,
    );
    let r = json(&hypflow(
        dir.path(),
        &[
            "prox",
            "--space",
            space,
            "--objective",
            obj_file.to_str().unwrap(),
            "--x",
            x,
            "--tau",
            "1",
        ],
    ));
    assert!((r["y"]["offset"].as_f64().unwrap() - 2.0).abs() < 1e-9);
}

#[test]
fn prox_rejects_malformed_descriptors() {
    let dir = TempDir::new().unwrap();
    let path = file(&dir, "path.json", PATH10);
    let space = path.to_str().unwrap();
    let x = r#"{"edge": [0, 1], "offset": 3.0}"#;
    for objective in [
        r#"{"type": "distance"}"#,
        r#"{"type": "distance", "p": {"vertex": 0}, "b": 1}"#,
        r#"{"type": "cubic", "p": {"vertex": 0}}"#,
        r#"{"format": 2, "type": "distance", "p": {"vertex": 0}}"#,
        "{not json",
    ] {
        let out = hypflow(
            dir.path(),
            &[
                "prox",
                "--space",
                space,
                "--objective",
                objective,
                "--x",
                x,
                "--tau",
                "1",
            ],
        );
        assert_eq!(out.status.code(), Some(2), "{objective}");
        assert!(stderr(&out).contains("error"), "{}", stderr(&out));
    }
    let objective = r#"{"type": "distance", "p": {"vertex": 0}}"#;
    let far = r#"{"edge": [0, 1], "offset": 30.0}"#;
    let out = hypflow(
        dir.path(),
        &[
            "prox",
            "--space",
            space,
            "--objective",
            objective,
            "--x",
            far,
            "--tau",
            "1",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    let out = hypflow(
        dir.path(),
        &[
            "prox",
            "--space",
            space,
            "--objective",
            objective,
            "--x",
            x,
            "--tau",
            "-1",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
}

fn csv_rows(text: &[u8]) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(text);
    assert_eq!(
        r.headers().unwrap().iter().collect::<Vec<_>>(),
        [
            "iter",
            "f_value",
            "dist_to_p",
            "displacement",
            "moreau_value"
        ]
    );
    r.records()
        .map(|rec| rec.unwrap().iter().map(str::to_string).collect())
        .collect()
}

#[test]
fn flow_on_a_path() {
    let dir = TempDir::new().unwrap();
    let path = file(&dir, "path.json", PATH10);
    let space = path.to_str().unwrap();
    let objective = r#"{"type": "sqdist", "p": {"vertex": 0}, "K": 1.0, "R": 10.0}"#;
    let x0 = r#"{"edge": [0, 1], "offset": 3.0}"#;
    let base = [
        "flow",
        "--space",
        space,
        "--objective",
        objective,
        "--tau",
        "2",
    ];

    let out = hypflow(
        dir.path(),
        &[&base[..], &["--x0", x0, "--max-iter", "5"]].concat(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let rows = csv_rows(&out.stdout);
    let dist: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    for (i, d) in dist.iter().enumerate() {
        assert!((d - 3.0 / 3f64.powi(i as i32)).abs() < 1e-9, "{dist:?}");
    }

    let out = hypflow(
        dir.path(),
        &[&base[..], &["--x0", r#"{"vertex": 0}"#]].concat(),
    );
    assert_eq!(csv_rows(&out.stdout).len(), 1);
    assert!(stderr(&out).contains("minimizer"));

    let out = hypflow(
        dir.path(),
        &[&base[..], &["--x0", x0, "--max-iter", "0"]].concat(),
    );
    assert_eq!(csv_rows(&out.stdout).len(), 1);
    assert!(
        stderr(&out).contains("stop_reason: budget"),
        "{}",
        stderr(&out)
    );

    let csv_out = dir.path().join("trace.csv");
    let out = hypflow(
        dir.path(),
        &[
            &base[..],
            &[
                "--x0",
                x0,
                "--out",
                csv_out.to_str().unwrap(),
                "--stop-at-ball",
                "--epsilon",
                "0.1",
            ],
        ]
        .concat(),
    );
    assert!(out.status.success() && out.stdout.is_empty());
    assert!(
        stderr(&out).contains("stop_reason: ball"),
        "{}",
        stderr(&out)
    );
    assert_eq!(csv_rows(&fs::read(&csv_out).unwrap()).len(), 3);
}

#[test]
fn verify_all_on_trees_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let args = [
        "verify", "--suite", "all", "--space", "tree", "--trials", "100", "--seed", "7",
    ];
    let a = hypflow(dir.path(), &args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert!(String::from_utf8_lossy(&a.stdout).contains("0 failed"));
    let bundle = dir.path().join("hypflow-verify.json");
    let first = (
        fs::read(&bundle).unwrap(),
        fs::read(dir.path().join("hypflow-verify.csv")).unwrap(),
    );

    let b = hypflow(dir.path(), &args);
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(first.0, fs::read(&bundle).unwrap());
    assert_eq!(
        first.1,
        fs::read(dir.path().join("hypflow-verify.csv")).unwrap()
    );

    let doc: Value = serde_json::from_slice(&first.0).unwrap();
    assert_eq!(doc["format"], 1);
    assert_eq!(doc["summary"]["failed"], 0);
    let reports = doc["reports"].as_array().unwrap();
    assert_eq!(
        doc["summary"]["total"].as_u64().unwrap() as usize,
        reports.len()
    );
    let csv_lines = String::from_utf8(first.1).unwrap().lines().count();
    assert_eq!(csv_lines, reports.len() + 1);
}

#[test]
fn verify_contraction_on_perturbed_trees() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("c.json");
    let out = hypflow(
        dir.path(),
        &[
            "verify",
            "--suite",
            "contraction",
            "--space",
            "perturbed",
            "--delta-build",
            "0.05",
            "--trials",
            "100",
            "--out",
            out_path.to_str().unwrap(),
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc: Value = serde_json::from_slice(&fs::read(&out_path).unwrap()).unwrap();
    assert!(doc["reports"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["inputs"]["delta_build"] == 0.05));
    assert!(dir.path().join("c.csv").exists());
}

#[test]
fn verify_on_a_space_file() {
    let dir = TempDir::new().unwrap();
    let c4 = file(&dir, "c4.json", C4);
    let out = hypflow(
        dir.path(),
        &[
            "verify",
            "--suite",
            "conv",
            "--space",
            c4.to_str().unwrap(),
            "--trials",
            "20",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn verify_input_errors_write_nothing() {
    let dir = TempDir::new().unwrap();
    for args in [
        &["verify", "--suite", "bogus", "--space", "tree"][..],
        &["verify", "--suite", "conv", "--space", "nowhere.json"],
        &["verify", "--suite", "conv", "--space", "tree", "--tol", "0"],
        &[
            "verify",
            "--suite",
            "conv",
            "--space",
            "perturbed",
            "--delta-build",
            "-1",
        ],
    ] {
        let out = hypflow(dir.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
        assert_eq!(
            fs::read_dir(dir.path()).unwrap().count(),
            0,
            "{args:?} wrote a bundle"
        );
    }
}
