//! End-to-end tests of the binary: spawn it, check output and exit codes.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sphereval"))
}

#[test]
fn multipliers_cosine_ground_truth() {
    let out = bin()
        .args([
            "multipliers",
            "--transform",
            "cosine",
            "--n",
            "3",
            "--i",
            "1",
            "--kmax",
            "4",
        ])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rows = text.lines();
    assert_eq!(rows.next(), Some("k,value"));
    let parse = |line: &str| -> (usize, f64) {
        let mut parts = line.split(',');
        (
            parts.next().unwrap().parse().unwrap(),
            parts.next().unwrap().parse().unwrap(),
        )
    };
    let values: Vec<(usize, f64)> = rows.map(parse).collect();
    assert_eq!(values.len(), 5);
    assert!((values[0].1 - 0.5).abs() < 1e-12);
    assert!((values[2].1 - 0.125).abs() < 1e-12);
    assert_eq!(values[1].1, 0.0);
}

#[test]
fn multipliers_box_degree_one_is_zero() {
    let out = bin()
        .args([
            "multipliers", "--transform", "box", "--n", "3", "--j", "3", "--kmax", "2",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row1 = text.lines().nth(2).unwrap();
    assert!(row1.starts_with("1,0"), "row {row1}");
}

#[test]
fn invalid_degree_exits_with_usage_error() {
    let out = bin()
        .args([
            "multipliers", "--transform", "cosine", "--n", "3", "--i", "0", "--kmax", "4",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("range"), "stderr: {err}");
}

#[test]
fn body_support_and_mass() {
    let dir = tempdir();
    let body = dir.join("cube.json");
    std::fs::write(
        &body,
        r#"{"type":"polytope","vertices":[[0,0,0],[1,0,0],[0,1,0],[0,0,1],[1,1,0],[1,0,1],[0,1,1],[1,1,1]]}"#,
    )
    .unwrap();
    let out = bin()
        .args(["body", "--file"])
        .arg(&body)
        .args(["--op", "support", "--dir", "1,0,0"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: f64 = String::from_utf8(out.stdout).unwrap().trim().parse().unwrap();
    assert!((v - 1.0).abs() < 1e-12);

    let out = bin()
        .args(["body", "--file"])
        .arg(&body)
        .args(["--op", "mass", "--order", "1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: f64 = String::from_utf8(out.stdout).unwrap().trim().parse().unwrap();
    assert!((v - 3.0 * std::f64::consts::PI).abs() < 1e-10, "mass {v}");
}

#[test]
fn apply_fourier_twice_is_identity() {
    let dir = tempdir();
    let input = dir.join("v.json");
    let coeffs = [0.9, 0.31, -0.11, 0.04];
    std::fs::write(
        &input,
        serde_json::to_string(&serde_json::json!({
            "n": 4, "i": 2, "space": "grassmannian", "parity": "even",
            "coeffs": coeffs,
        }))
        .unwrap(),
    )
    .unwrap();
    let once = dir.join("f1.json");
    let twice = dir.join("f2.json");
    let run = |inp: &std::path::Path, outp: &std::path::Path, i: &str| {
        let st = bin()
            .args(["apply", "--op", "fourier", "--n", "4", "--i", i, "--rep", "klain", "--in"])
            .arg(inp)
            .arg("--out")
            .arg(outp)
            .status()
            .unwrap();
        assert!(st.success());
    };
    run(&input, &once, "2");
    run(&once, &twice, "2");
    let back: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&twice).unwrap()).unwrap();
    let got = back["coeffs"].as_array().unwrap();
    for (a, b) in got.iter().zip(coeffs) {
        assert!((a.as_f64().unwrap() - b).abs() < 1e-9);
    }
}

#[test]
fn convert_round_trip_through_crofton() {
    let dir = tempdir();
    let input = dir.join("g.json");
    std::fs::write(
        &input,
        serde_json::to_string(&serde_json::json!({
            "n": 4, "i": 2, "space": "sphere", "parity": "even",
            "coeffs": [0.8, 0.0, 0.2, 0.0, -0.05],
        }))
        .unwrap(),
    )
    .unwrap();
    let mid = dir.join("c.json");
    let back = dir.join("g2.json");
    let st = bin()
        .args(["convert", "--from", "generating", "--to", "crofton", "--n", "4", "--i", "2", "--in"])
        .arg(&input)
        .arg("--out")
        .arg(&mid)
        .status()
        .unwrap();
    assert!(st.success());
    let st = bin()
        .args(["convert", "--from", "crofton", "--to", "generating", "--n", "4", "--i", "2", "--in"])
        .arg(&mid)
        .arg("--out")
        .arg(&back)
        .status()
        .unwrap();
    assert!(st.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&back).unwrap()).unwrap();
    let got = v["coeffs"].as_array().unwrap();
    for (a, b) in got.iter().zip([0.8, 0.0, 0.2, 0.0, -0.05]) {
        assert!((a.as_f64().unwrap() - b).abs() < 1e-9);
    }
}

#[test]
fn kappa_prints_constants() {
    let out = bin().args(["kappa", "3"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let val: f64 = text
        .lines()
        .next()
        .unwrap()
        .split('=')
        .nth(1)
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!((val - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-12);
}

fn tempdir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "sphereval-cli-test-{}-{:?}",
        std::process::id(),
        std::thread::current().id()
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
