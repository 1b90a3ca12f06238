use std::process::Command as Process;

use cli::{dispatch, Outcome, EXIT_INVALID, EXIT_OK, EXIT_TOLERANCE, EXIT_USAGE};
use proptest::prelude::*;
use serde_json::Value;
use spectral_zeta::parse_complex;

fn run(args: &[&str]) -> Outcome {
    dispatch(std::iter::once("mumford").chain(args.iter().copied()))
}

fn report(args: &[&str]) -> Value {
    let o = run(args);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    serde_json::from_str(&o.stdout).unwrap()
}

fn path_str(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn euler_split_example() {
    let r = report(&["euler", "--mode", "split", "--q", "2", "--g", "1", "--l", "1", "--s", "2"]);
    let row = &r["rows"][0];
    let det = parse_complex(row["determinant"].as_str().unwrap()).unwrap();
    assert!((det.re - 0.75).abs() < 1e-8 && det.im.abs() < 1e-8);
    assert_eq!(row["closed_form"], "0.75+0j");
    assert_eq!(row["pass"], true);
    assert_eq!(row["tolerance"], 1e-8);
}

#[test]
fn extend_writes_the_six_by_six() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let out = dir.path().join("out.csv");
    std::fs::write(&a, "0,1,0\n1,0,1\n0,1,0\n").unwrap();
    let r = report(&["extend", "--e", "2", "--matrix", path_str(&a), "--csv", path_str(&out)]);
    assert_eq!(r["output_dim"], 6);
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv, "0,1,0,0,0,0\n0,0,1,0,0,0\n0,0,0,1,0,0\n1,0,0,0,1,0\n0,0,0,0,0,1\n0,0,1,0,0,0\n");

    let g = report(&["extend", "--e", "3", "--graph", "builtin:theta"]);
    assert_eq!(g["matches_subdivided_graph"]["value"], true);
    assert_eq!(g["output_dim"], 9);

    std::fs::write(&a, "0,1\n1,2\n").unwrap();
    assert_eq!(run(&["extend", "--e", "2", "--matrix", path_str(&a)]).code, EXIT_INVALID);
    std::fs::write(&a, "0,1,0\n1,0\n").unwrap();
    assert_eq!(run(&["extend", "--e", "2", "--matrix", path_str(&a)]).code, EXIT_INVALID);
}

#[test]
fn sft_table_from_a_document() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    std::fs::write(&g, r#"{"vertices":[0,1],"edges":[{"id":0,"src":1,"dst":0},{"id":1,"src":0,"dst":1},{"id":2,"src":1,"dst":0}]}"#).unwrap();
    let r = report(&["sft", "--graph", path_str(&g), "--nmax", "5"]);
    let rows = r["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    // the theta graph: 6 letters, 2 successors each
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row["theta"]["value"], 6 << (i + 1));
        assert_eq!(row["theta_enumerated"], 6 << (i + 1));
        assert_eq!(row["rank_f"]["pass"], true);
    }
}

#[test]
fn bare_cycle_breaks_the_rank_law() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("c.json");
    std::fs::write(&g, r#"{"vertices":[0,1,2],"edges":[{"id":0,"src":0,"dst":1},{"id":1,"src":1,"dst":2},{"id":2,"src":2,"dst":0}]}"#).unwrap();
    let o = run(&["sft", "--graph", path_str(&g), "--nmax", "3"]);
    assert_eq!(o.code, EXIT_TOLERANCE);
    let r: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(r["rows"][0]["kernel_dim"], 2);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["tree", "--p", "2", "--bogus"]).code, EXIT_USAGE);
    assert_eq!(run(&["nonsense"]).code, EXIT_USAGE);
    assert_eq!(run(&[]).code, EXIT_USAGE);
    assert_eq!(run(&["--help"]).code, EXIT_OK);
    assert_eq!(run(&["sft", "--graph", "builtin:theta", "--nmax", "0"]).code, EXIT_INVALID);
    assert_eq!(run(&["euler", "--mode", "split", "--q", "2"]).code, EXIT_INVALID);
    assert_eq!(run(&["euler", "--mode", "split", "--q", "2", "--g", "1", "--s", "x"]).code, EXIT_INVALID);
    assert_eq!(run(&["tree", "--p", "4"]).code, EXIT_INVALID);
    assert_eq!(run(&["sft", "--graph", "/nonexistent/g.json"]).code, EXIT_INVALID);
    assert_eq!(run(&["sft", "--graph", "builtin:nope"]).code, EXIT_INVALID);
    assert_eq!(run(&["dirac", "--csv", "/nonexistent/dir/x.csv"]).code, EXIT_INVALID);
    assert_eq!(run(&["tree", "--p", "2", "--csv", "/tmp/never.csv"]).code, EXIT_INVALID);
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_mumford");
    let o = Process::new(bin).arg("--bogus").output().unwrap();
    assert_eq!(o.status.code(), Some(EXIT_USAGE));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    let o = Process::new(bin).args(["euler", "--mode", "split", "--q", "3", "--g", "2", "--s-grid", "1,2-0.5j"]).output().unwrap();
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn ck_reports_and_fails_on_walks() {
    let r = report(&["ck", "--graph", "builtin:dumbbell", "--N", "4"]);
    assert_eq!(r["checks"]["source-relation"]["holds"], true);
    assert_eq!(r["checks"]["delta-commutation"]["required"], false);
    assert!(r["clipped"].as_u64().unwrap() > 0);
    let o = run(&["ck", "--graph", "builtin:theta", "--alphabet", "walks"]);
    assert_eq!(o.code, EXIT_TOLERANCE);
    let w: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(w["checks"]["range-relation"]["holds"], false);
    assert_eq!(w["checks"]["edge-matrix-relation"]["holds"], true);
}

#[test]
fn tree_and_measure() {
    let r = report(&["tree", "--p", "2", "--radius", "3", "--matrix", "2,0,0,1"]);
    assert_eq!(r["vertices"], 1 + 3 + 6 + 12);
    assert_eq!(r["displacement"]["translation_length"], 1);
    assert_eq!(r["distance_vs_lattice"]["mismatches"], 0);
    let r = report(&["tree", "--p", "3", "--f", "2", "--radius", "2"]);
    assert_eq!(r["q"], 9);
    assert_eq!(r["distance_vs_lattice"], Value::Null);

    // base edge at p = 2: forward shadow 1/4, reversed (3/4 − 1/4)
    let m = report(&["measure", "--p", "2", "--radius", "4", "--len", "2", "--word", "0"]);
    assert_eq!(m["total_mass"], "3/4");
    assert_eq!(m["cylinder"]["mass"], "1/8");
    assert_eq!(run(&["measure", "--p", "2", "--radius", "4", "--word", "0,0"]).code, EXIT_INVALID);
}

#[test]
fn schottky_quotients() {
    let dir = tempfile::tempdir().unwrap();
    let gpath = dir.path().join("q.json");
    let r = report(&["schottky", "--p", "2", "--gen", "2,0,0,1"]);
    assert_eq!(r["genus"], 1);
    assert_eq!(r["betti_number"], 1);
    assert_eq!(r["translation_lengths"][0], 1);
    let args = ["schottky", "--p", "2", "--gen", "2,0,0,1", "--level", "1", "--tail-convention", "terminal-loop", "--tail-depth", "2"];
    let looped = report(&[&args[..], &["--graph-out", path_str(&gpath)]].concat());
    assert_eq!(looped["sinks"], serde_json::json!([]));
    let s = report(&["sft", "--graph", path_str(&gpath), "--nmax", "5"]);
    assert_eq!(s["vertices"], looped["vertices"]);
    let theta: Vec<Value> = s["rows"].as_array().unwrap().iter().map(|r| r["theta"]["value"].clone()).collect();
    assert_eq!(theta, serde_json::json!([16, 26, 40, 60, 92]).as_array().unwrap().clone());
    assert_eq!(run(&["schottky", "--p", "2", "--gen", "1,0,0,1"]).code, EXIT_INVALID);
    // conjugate of diag(4,1) by [[1,3],[1,1]], up to scale
    let g2 = report(&["schottky", "--p", "2", "--gen", "2,0,0,1", "--gen", "1,-9,3,-11", "--equalize"]);
    assert_eq!(g2["betti_number"], 2);
    assert_eq!(g2["loop_lengths"], serde_json::json!([2, 2]));
}

#[test]
fn foam_three_eigenvalues() {
    let dir = tempfile::tempdir().unwrap();
    let l = dir.path().join("l.json");
    let pi = std::f64::consts::PI;
    let ln2 = 2f64.ln();
    let doc = format!(
        r#"[{{"alpha":"0+0j","d_gamma":1,"d_zero":0,"loops":[[0]]}},{{"alpha":"0+{}j","d_gamma":1,"d_zero":1,"vertex":1,"loops":[[2]]}},{{"alpha":"0.5+{}j","d_gamma":0,"d_zero":1,"vertex":0}}]"#,
        pi / ln2,
        pi / 4.0 / ln2
    );
    std::fs::write(&l, doc).unwrap();
    let r = report(&["foam", "--graph", "builtin:barbell", "--lambdas", path_str(&l), "--q", "2", "--valence", "3"]);
    let dims: Vec<Value> = r["eigenvalues"].as_array().unwrap().iter().map(|e| e["dims"]["value"].clone()).collect();
    assert_eq!(dims, vec![serde_json::json!([1, 1]), serde_json::json!([2, 2]), serde_json::json!([1, 1])]);
    assert_eq!(r["orthogonal"]["value"], true);
    let e = report(&["euler", "--mode", "foam", "--q", "2", "--lambdas", path_str(&l), "--s", "2"]);
    // (1 − 1/4)(1 + 1/4)²(1 − √2 e^{iπ/4}/4) = (3/4)(25/16)(3/4 − i/4)
    let det = parse_complex(e["rows"][0]["determinant"].as_str().unwrap()).unwrap();
    let k = 0.75 * 25.0 / 16.0;
    assert!((det.re - 0.75 * k).abs() < 1e-8 && (det.im + 0.25 * k).abs() < 1e-8, "{det}");
}

#[test]
fn dirac_levels() {
    let r = report(&["dirac", "--variant", "plain", "--l", "2", "--nmax", "3"]);
    assert_eq!(r["constant_spacing"]["value"], true);
    assert!(r["levels"].as_array().unwrap().iter().all(|l| l["eigenvalue"].as_f64().unwrap().fract() == 0.0));
}

#[test]
fn selftest_subset() {
    let r = report(&["selftest", "--only", "1", "--only", "10"]);
    assert_eq!(r["passed"], 2);
    let o = run(&["selftest", "--only", "5"]);
    assert_eq!(o.code, EXIT_TOLERANCE);
    assert_eq!(run(&["selftest", "--only", "11"]).code, EXIT_INVALID);
}

fn keys_sorted(v: &Value) -> bool {
    match v {
        Value::Object(m) => m.keys().zip(m.keys().skip(1)).all(|(a, b)| a < b) && m.values().all(keys_sorted),
        Value::Array(a) => a.iter().all(keys_sorted),
        _ => true,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn euler_output_is_deterministic(q in prop::sample::select(vec![2u64, 3, 5]), g in 1u32..4, s in 0.5f64..3.0, t in -1.0f64..1.0) {
        let s_arg = format!("{s}{t:+}j");
        let args = ["euler", "--mode", "split", "--q", &q.to_string(), "--g", &g.to_string(), "--s", &s_arg];
        let a = run(&args);
        let b = run(&args);
        prop_assert_eq!(a.code, EXIT_OK);
        prop_assert_eq!(&a.stdout, &b.stdout);
        let v: Value = serde_json::from_str(&a.stdout).unwrap();
        prop_assert!(keys_sorted(&v));
        let z = parse_complex(&s_arg).unwrap();
        let expect = (1.0 - spectral_zeta::C::from(q as f64).powc(-z)).powi(g as i32);
        let det = parse_complex(v["rows"][0]["determinant"].as_str().unwrap()).unwrap();
        prop_assert!((det - expect).norm() / expect.norm() < 1e-8);
    }

    #[test]
    fn sft_output_is_deterministic(name in prop::sample::select(vec!["theta", "dumbbell", "k4", "barbell"]), n in 1usize..4) {
        let g = format!("builtin:{name}");
        let args = ["sft", "--graph", g.as_str(), "--nmax", &n.to_string()];
        let (a, b) = (run(&args), run(&args));
        prop_assert_eq!(&a, &b);
        prop_assert!(keys_sorted(&serde_json::from_str(&a.stdout).unwrap()));
    }
}
