//! Drives the `parity-anneal` binary end to end.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parity-anneal"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = run(dir, args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn enum_lists_three_car_instances() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        dir.path(),
        &["paintshop", "enum", "--cmax", "3", "-o", "inst.csv"],
    );
    let csv = fs::read_to_string(dir.path().join("inst.csv")).unwrap();
    for label in ["(2,1,1)", "(3,1,1)", "(3,1,2)"] {
        assert!(csv.contains(label), "{label} missing from\n{csv}");
    }
    assert!(dir.path().join("inst.csv.manifest.json").exists());
}

#[test]
fn compile_then_scan_two_body() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(
        d,
        &[
            "compile",
            "--form",
            "2body",
            "--instance",
            "(3,1,1)",
            "-o",
            "c.json",
        ],
    );
    let c = json(&d.join("c.json"));
    assert_eq!(c["num_spins"], 9);
    ok(
        d,
        &[
            "gap-scan",
            "--encoding",
            "2body",
            "--input",
            "c.json",
            "--grid",
            "41",
            "-o",
            "g.json",
        ],
    );
    let g = json(&d.join("g.json"));
    assert!(g["min_gap"].as_f64().unwrap() > 0.0, "{g}");
}

#[test]
fn embed_and_sample_square() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(
        d,
        &[
            "embed",
            "--style",
            "original",
            "--pegasus",
            "3",
            "-o",
            "e.json",
        ],
    );
    assert_eq!(json(&d.join("e.json"))["num_nodes"], 20);
    ok(
        d,
        &[
            "--seed",
            "4",
            "sample",
            "--embedding",
            "e.json",
            "--samples",
            "200",
            "--sweeps",
            "50",
            "-o",
            "s.txt",
        ],
    );
    let first = fs::read(d.join("s.txt")).unwrap();
    ok(
        d,
        &[
            "--seed",
            "4",
            "sample",
            "--embedding",
            "e.json",
            "--samples",
            "200",
            "--sweeps",
            "50",
            "-o",
            "s.txt",
        ],
    );
    assert_eq!(first, fs::read(d.join("s.txt")).unwrap());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(
        run(
            d,
            &["compile", "--form", "sideways", "--instance", "(3,1,1)"]
        )
        .status
        .code(),
        Some(2)
    );
    assert_eq!(run(d, &["no-such-command"]).status.code(), Some(2));
    assert_eq!(
        run(d, &["compile", "--form", "2body", "--instance", "(9,9,9)"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(d, &["sample", "--embedding", "missing.json"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn report_is_reproducible_and_checks_manifests() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(
        d,
        &[
            "gap-scan",
            "--encoding",
            "all",
            "--instance",
            "(3,1,2)",
            "--grid",
            "21",
            "-o",
            "cmp.json",
        ],
    );
    ok(
        d,
        &[
            "embed",
            "--style",
            "dense",
            "--pegasus",
            "3",
            "-o",
            "e.json",
        ],
    );
    ok(
        d,
        &[
            "sample",
            "--embedding",
            "e.json",
            "--samples",
            "100",
            "--sweeps",
            "20",
            "-o",
            "s.txt",
            "--stats",
            "st.json",
        ],
    );
    let artifacts = ["cmp.json", "st.json"];
    let mut args = vec!["report", "--out-dir", "r1"];
    args.extend(artifacts);
    ok(d, &args);
    args[2] = "r2";
    ok(d, &args);
    for f in [
        "min_gaps.csv",
        "square_performance.csv",
        "gs_distribution.csv",
    ] {
        let a = fs::read(d.join("r1").join(f)).unwrap();
        assert_eq!(a, fs::read(d.join("r2").join(f)).unwrap(), "{f}");
        assert!(String::from_utf8(a).unwrap().starts_with("# manifest="));
    }
    let text = fs::read_to_string(d.join("st.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["manifest"] = "0000".into();
    fs::write(d.join("st.json"), v.to_string()).unwrap();
    args[2] = "r3";
    assert_eq!(run(d, &args).status.code(), Some(1));
}
