use std::path::Path;
use std::process::{Command, Output};

use riccati::instances::grid;
use riccati::riccati::BlockOperator;
use riccati::{ComplexMatrix, Subspace};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_riccati"))
        .args(args)
        .env_remove("RICCATI_TOL_PROFILE")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_json<T: serde::Serialize>(dir: &Path, name: &str, v: &T) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p
}

#[test]
fn example_then_solve_involution() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("inv1.json");
    report(&run(&["example", "involution", "1", "--out", path(&file)]));
    let r = report(&run(&["solve", path(&file)]));
    let sols = r["outputs"]["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 2);
    let mut values: Vec<f64> = sols.iter().map(|s| s["x"]["data"][0][0].as_f64().unwrap()).collect();
    values.sort_by(f64::total_cmp);
    assert!((values[0] + 1.0).abs() < 1e-12 && (values[1] - 1.0).abs() < 1e-12);
    assert!(sols.iter().all(|s| s["spectral"] == true && s["isolated"] == true));
    assert_eq!(r["inputs"]["b"]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn zero_coupling_has_single_zero_solution() {
    let dir = tempfile::tempdir().unwrap();
    let pol = Default::default();
    let b = BlockOperator::new(
        ComplexMatrix::from_real_diagonal(&[1.0, 2.0]),
        ComplexMatrix::from_real_diagonal(&[-1.0]),
        ComplexMatrix::zeros(2, 1),
        &pol,
    )
    .unwrap();
    let file = write_json(dir.path(), "b.json", &b);
    let r = report(&run(&["solve", path(&file)]));
    let sols = r["outputs"]["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 1);
    assert_eq!(sols[0]["norm_x"].as_f64(), Some(0.0));
}

#[test]
fn enumeration_and_uniqueness_flags() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("inv2.json");
    report(&run(&["example", "involution", "2", "--out", path(&file)]));
    let r = report(&run(&[
        "solve",
        path(&file),
        "--enumerate-contractive",
        "--check-uniqueness",
        "--samples",
        "4",
        "--seed",
        "9",
    ]));
    let families = r["outputs"]["families"].as_array().unwrap();
    assert_eq!(families.len(), 2);
    for f in families {
        assert!(f["members"].as_array().unwrap().len() > 1);
        assert_eq!(f["lattice_only"], false);
    }
    let verdicts = r["outputs"]["uniqueness"].as_array().unwrap();
    assert!(verdicts.iter().all(|v| v["unique"] == false));
}

#[test]
fn too_many_clusters_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let d: Vec<f64> = (0..25).map(|i| i as f64).collect();
    let b = BlockOperator::new(
        ComplexMatrix::from_real_diagonal(&d[..13]),
        ComplexMatrix::from_real_diagonal(&d[13..]),
        ComplexMatrix::zeros(13, 12),
        &Default::default(),
    )
    .unwrap();
    let file = write_json(dir.path(), "big.json", &b);
    let out = run(&["solve", path(&file)]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("cap of 20"), "{}", stderr(&out));
}

#[test]
fn malformed_json_exits_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    std::fs::write(&file, "{\n  \"n0\": 1,\n  \"n1\": oops\n}").unwrap();
    let out = run(&["solve", path(&file)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
    let out = run(&["decompose", path(&file), path(&file)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn error_path_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_json(dir.path(), "p.json", &Subspace::coordinate(2, [0]));
    let q = write_json(dir.path(), "q.json", &Subspace::coordinate(3, [0]));
    assert_eq!(run(&["decompose", path(&p), path(&q)]).status.code(), Some(3));
    assert_eq!(run(&["example", "bogus", "1"]).status.code(), Some(2));
    assert_eq!(run(&["example", "multiplication", "1"]).status.code(), Some(2));
    assert_eq!(run(&["example", "involution", "x"]).status.code(), Some(2));
    assert_eq!(run(&["refine", "16,abc"]).status.code(), Some(2));
    assert_eq!(run(&["solve", "/nonexistent/b.json"]).status.code(), Some(2));
    assert_eq!(run(&["--rank-rtol", "-1", "refine", "4"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));

    let inv = dir.path().join("inv.json");
    report(&run(&["example", "involution", "2", "--out", path(&inv)]));
    let x = write_json(dir.path(), "x.json", &ComplexMatrix::identity(3));
    assert_eq!(run(&["check", path(&inv), path(&x)]).status.code(), Some(3));
}

#[test]
fn decompose_reports_angle() {
    let dir = tempfile::tempdir().unwrap();
    let t = 0.3_f64;
    let line = Subspace::from_spanning(&ComplexMatrix::from_real(2, 1, &[t.cos(), t.sin()]), &Default::default()).unwrap();
    let p = write_json(dir.path(), "p.json", &Subspace::coordinate(2, [0]));
    let q = write_json(dir.path(), "q.json", &line);
    let r = report(&run(&["decompose", path(&p), path(&q)]));
    let theta = r["outputs"]["decomposition"]["theta"].as_array().unwrap();
    assert!((theta[0].as_f64().unwrap() - 0.3).abs() < 1e-14);
    assert_eq!(r["outputs"]["is_graph"], true);
    assert!((r["outputs"]["dist"].as_f64().unwrap() - t.sin()).abs() < 1e-12);

    let r = report(&run(&["decompose", path(&p), path(&p)]));
    assert!(r["outputs"]["decomposition"]["theta"].as_array().unwrap().is_empty());
}

#[test]
fn multiplication_example_grid() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("mult8.json");
    report(&run(&["example", "multiplication", "8", "--out", path(&file)]));
    let inst: Value = serde_json::from_slice(&std::fs::read(&file).unwrap()).unwrap();
    let b: BlockOperator = serde_json::from_value(inst["b"].clone()).unwrap();
    assert_eq!(b.n0, 8);
    for (j, l) in grid(8).iter().enumerate() {
        assert_eq!(b.a0[(j, j)].re, *l);
        assert!((l - (j + 1) as f64 / 9.0).abs() < 1e-15);
    }
    assert_eq!(inst["known_solutions"].as_array().unwrap().len(), 1);
}

#[test]
fn involution_three_example() {
    let r = report(&run(&["example", "involution", "3"]));
    let b: BlockOperator = serde_json::from_value(r["outputs"]["instance"]["b"].clone()).unwrap();
    assert_eq!(b.assemble().shape(), (6, 6));
    assert_eq!((&b.v - &ComplexMatrix::identity(3)).frobenius(), 0.0);
}

#[test]
fn refine_writes_monotone_csv() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("refine.csv");
    report(&run(&["refine", "16,32,64", "--out", path(&file)]));
    let csv = std::fs::read_to_string(&file).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,norm_x,dist"));
    let dist: Vec<f64> = lines.map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert_eq!(dist.len(), 3);
    assert!(dist.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn check_reports_residual_and_invariance() {
    let dir = tempfile::tempdir().unwrap();
    let inv = dir.path().join("inv.json");
    report(&run(&["example", "involution", "2", "--out", path(&inv)]));
    let x = write_json(dir.path(), "x.json", &ComplexMatrix::from_real_diagonal(&[1.0, -1.0]));
    let r = report(&run(&["check", path(&inv), path(&x)]));
    assert_eq!(r["outputs"]["agree"], true);
    assert_eq!(r["outputs"]["solution"]["spectral"], false);
    let zero = write_json(dir.path(), "zero.json", &ComplexMatrix::zeros(2, 2));
    let r = report(&run(&["check", path(&inv), path(&zero)]));
    assert_eq!(r["outputs"]["check"]["residual_ok"], false);
    assert!(r["outputs"].get("solution").is_none());
}

#[test]
fn runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("nu.json");
    let a = run(&["example", "constructed-nonunique", "1", "--out", path(&file)]);
    let first = std::fs::read(&file).unwrap();
    let b = run(&["example", "constructed-nonunique", "1", "--out", path(&file)]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(first, std::fs::read(&file).unwrap());
    let args = ["solve", path(&file), "--enumerate-contractive", "--check-uniqueness", "--samples", "5"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn emitted_files_reparse() {
    let dir = tempfile::tempdir().unwrap();
    for (kind, params) in [
        ("involution", vec!["2"]),
        ("multiplication", vec!["5"]),
        ("random", vec!["2", "3", "4"]),
        ("constructed-dissipative", vec!["1"]),
    ] {
        let file = dir.path().join(format!("{kind}.json"));
        let mut args = vec!["example", kind];
        args.extend(params);
        args.extend(["--out", path(&file)]);
        report(&run(&args));
        let inst: Value = serde_json::from_slice(&std::fs::read(&file).unwrap()).unwrap();
        let b: BlockOperator = serde_json::from_value(inst["b"].clone()).unwrap();
        for x in inst["known_solutions"].as_array().unwrap() {
            let x: ComplexMatrix = serde_json::from_value(x.clone()).unwrap();
            assert!(riccati::riccati::residual(&b, &x).unwrap() < 1e-8);
        }
        report(&run(&["solve", path(&file)]));
    }
}

#[test]
fn tolerances_are_echoed_and_overridable() {
    let r = report(&run(&["refine", "4", "--residual-atol", "1e-7"]));
    assert_eq!(r["tolerances"]["residual_atol"].as_f64(), Some(1e-7));
    assert!(r.get("timings").is_none());
    let r = report(&run(&["refine", "4", "--timings"]));
    assert!(r["timings"]["refine"].is_number());

    let strict = Command::new(env!("CARGO_BIN_EXE_riccati"))
        .args(["refine", "4"])
        .env("RICCATI_TOL_PROFILE", "strict")
        .output()
        .unwrap();
    let r = report(&strict);
    assert_eq!(r["tolerances"]["rank_rtol"].as_f64(), Some(1e-12));
    let bad = Command::new(env!("CARGO_BIN_EXE_riccati"))
        .args(["refine", "4"])
        .env("RICCATI_TOL_PROFILE", "loose")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
