use std::path::PathBuf;
use std::process::{Command, Output};

fn spec(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jetgeo"))
        .args(args)
        .env_remove("JETGEO_SEED")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

/// Parses CSV output into a header and rows.
fn table(out: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn invariants_of_flat_space_vanish() {
    let out = run(&["invariants", s(&spec("flat3.json"))]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let (header, rows) = table(&out);
    assert_eq!(header, ["table", "index", "expression"]);
    assert_eq!(rows.iter().filter(|r| r[0] == "Pi").count(), 27);
    for name in ["G0", "G1", "G2", "G3"] {
        assert!(rows.iter().any(|r| r[0] == name), "missing {name}");
    }
    assert!(rows.iter().all(|r| r[2] == "0"), "{rows:?}");
}

#[test]
fn invariants_json_has_one_object_per_row() {
    let out = run(&["invariants", s(&spec("sphere.json")), "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v.as_array().unwrap();
    assert!(rows.len() >= 8);
    assert_eq!(rows[0]["table"], "Pi");
    assert_eq!(rows[0]["index"], "1.1.1");
}

#[test]
fn projectively_shifted_spec_has_identical_invariants() {
    let out = run(&["invariants", s(&spec("perturbed.json")), "--compare", s(&spec("shifted.json"))]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("IDENTICAL"));

    let out = run(&["invariants", s(&spec("flat3.json")), "--compare", s(&spec("perturbed.json"))]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("DIFFERENT"));
}

#[test]
fn malformed_expression_cites_the_grammar() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_temp(
        &dir,
        "bad.json",
        r#"{"coords": ["u1", "u2"], "n": 1, "christoffel": [{"lower": [1, 1], "upper": 2, "expr": "u1^^2"}]}"#,
    );
    let out = run(&["invariants", s(&bad)]);
    assert_eq!(code(&out), 2);
    let err = stderr(&out);
    assert!(err.contains("u1^^2") && err.contains("grammar"), "{err}");
}

#[test]
fn missing_file_and_bad_json_are_input_errors() {
    let out = run(&["invariants", "/nonexistent/spec.json"]);
    assert_eq!(code(&out), 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = write_temp(&dir, "bad.json", r#"{"coords": ["u1"], "n": 1, "extra": 3}"#);
    assert_eq!(code(&run(&["invariants", s(&bad)])), 2);
}

#[test]
fn equivalent_exit_codes() {
    let out = run(&["equivalent", s(&spec("perturbed.json")), s(&spec("shifted.json"))]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).starts_with("verdict"));
    assert!(stdout(&out).contains("\nEQUIVALENT,"));

    let out = run(&["equivalent", s(&spec("flat3.json")), s(&spec("perturbed.json"))]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("NOT EQUIVALENT"));

    let out = run(&["equivalent", s(&spec("flat3.json")), s(&spec("sphere.json"))]);
    assert_eq!(code(&out), 2);

    let out = run(&["equivalent", s(&spec("flat3.json")), s(&spec("perturbed.json")), "--samples", "0"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn residual_of_straight_lines_on_flat_space_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let flat = write_temp(&dir, "flat.json", r#"{"coords": ["u1", "u2"], "n": 1}"#);
    let out = run(&["residual", s(&flat), s(&spec("jets.json")), "--mode", "unparam"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let (header, rows) = table(&out);
    let max = column(&header, "max_abs");
    // the first jet is a straight line, the second has curvature 3
    assert_eq!(rows[0][max].parse::<f64>().unwrap(), 0.0);
    assert_eq!(rows[1][max].parse::<f64>().unwrap(), 3.0);
}

#[test]
fn residual_kind_mismatch_is_an_input_error() {
    let out = run(&["residual", s(&spec("sphere.json")), s(&spec("jets.json")), "--mode", "param"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("kind mismatch"));
}

#[test]
fn residual_reports_singular_covering_per_row() {
    let dir = tempfile::tempdir().unwrap();
    let jets = write_temp(
        &dir,
        "jets.json",
        r#"[{"kind": "secjet", "n": 1, "l": 2, "r": 2, "x": [0.0], "u": [0.0, 0.0],
            "derivs": [{"A": 1, "sigma": [1], "value": 0.0}, {"A": 2, "sigma": [1], "value": 1.0},
                       {"A": 1, "sigma": [1, 1], "value": 0.0}, {"A": 2, "sigma": [1, 1], "value": 0.0}]},
           {"kind": "secjet", "n": 1, "l": 2, "r": 2, "x": [0.0], "u": [0.0, 0.0],
            "derivs": [{"A": 1, "sigma": [1], "value": 1.0}, {"A": 2, "sigma": [1], "value": 1.0},
                       {"A": 1, "sigma": [1, 1], "value": 0.0}, {"A": 2, "sigma": [1, 1], "value": 0.0}]}]"#,
    );
    let flat = write_temp(&dir, "flat.json", r#"{"coords": ["u1", "u2"], "n": 1}"#);
    let out = run(&["residual", s(&flat), s(&jets), "--mode", "unparam"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let (header, rows) = table(&out);
    let err = column(&header, "error");
    assert!(!rows[0][err].is_empty());
    assert!(rows[1][err].is_empty());
    assert_eq!(rows[1][column(&header, "max_abs")].parse::<f64>().unwrap(), 0.0);

    let out = run(&["residual", s(&flat), s(&jets), "--mode", "param"]);
    assert_eq!(code(&out), 0);
    let (header, rows) = table(&out);
    assert!(rows.iter().all(|r| r[column(&header, "max_abs")].parse::<f64>().unwrap() == 0.0));
}

#[test]
fn geodesic_rejects_nonpositive_step() {
    for h in ["0", "-0.1"] {
        let out = run(&["geodesic", s(&spec("sphere.json")), "--start", "0,0", "--velocity", "1,0", "--h", h, "--steps", "3"]);
        assert_eq!(code(&out), 2, "h = {h}");
    }
    let out = run(&["geodesic", s(&spec("sphere.json")), "--start", "0,0,0", "--velocity", "1,0", "--h", "0.1", "--steps", "3"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn geodesic_on_flat_space_is_a_straight_line() {
    let dir = tempfile::tempdir().unwrap();
    let flat = write_temp(&dir, "flat.json", r#"{"coords": ["u1", "u2"], "n": 1}"#);
    let out = run(&["geodesic", s(&flat), "--start", "1,-1", "--velocity", "0.5,2", "--h", "0.25", "--steps", "8"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let (header, rows) = table(&out);
    assert_eq!(rows.len(), 9);
    let (t, u1, u2) = (column(&header, "t"), column(&header, "u1"), column(&header, "u2"));
    for row in &rows {
        let t: f64 = row[t].parse().unwrap();
        assert!((row[u1].parse::<f64>().unwrap() - (1.0 + 0.5 * t)).abs() <= 1e-14);
        assert!((row[u2].parse::<f64>().unwrap() - (-1.0 + 2.0 * t)).abs() <= 1e-14);
    }
    assert!(!header.contains(&"speed".to_string()));
}

#[test]
fn geodesic_on_the_sphere_keeps_its_speed() {
    let out = run(&["geodesic", s(&spec("sphere.json")), "--start", "0.3,0.1", "--velocity", "1,0.5", "--h", "0.001", "--steps", "1000"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let (header, rows) = table(&out);
    assert_eq!(rows.len(), 1001);
    let drift = column(&header, "speed_drift");
    let worst = rows.iter().map(|r| r[drift].parse::<f64>().unwrap()).fold(0.0, f64::max);
    assert!(worst <= 1e-8, "drift {worst}");
}

#[test]
fn geodesic_hitting_a_pole_exits_with_a_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let pole = write_temp(
        &dir,
        "pole.json",
        r#"{"coords": ["u1", "u2"], "n": 1, "christoffel": [{"lower": [1, 1], "upper": 1, "expr": "-sqrt(1 - u1)"}]}"#,
    );
    let out = run(&["geodesic", s(&pole), "--start", "0,0", "--velocity", "1,0", "--h", "0.25", "--steps", "40"]);
    assert_eq!(code(&out), 3, "{}", stdout(&out));
    let (header, rows) = table(&out);
    let last = rows.last().unwrap();
    assert!(!last[column(&header, "error")].is_empty());
}

#[test]
fn cover_check_passes_on_the_sphere() {
    let out = run(&["cover-check", s(&spec("sphere.json")), "--samples", "20"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stderr(&out).contains("PASS 20/20"));
    let (_, rows) = table(&out);
    assert_eq!(rows.len(), 20);
}

#[test]
fn symmetry_check_verdicts() {
    let sphere = spec("sphere.json");
    let out = run(&["symmetry-check", s(&sphere), "--point-field", "-v;u", "--samples", "20"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let out = run(&["symmetry-check", s(&sphere), "--point-field", "1;0", "--samples", "20"]);
    assert_eq!(code(&out), 1);

    let flat = spec("flat3.json");
    let out = run(&["symmetry-check", s(&flat), "--point-map", "u1+u2;u2;2*u3", "--samples", "20"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let out = run(&["symmetry-check", s(&flat), "--point-map", "u1;u2+u1^2;u3", "--samples", "20"]);
    assert_eq!(code(&out), 1);

    let out = run(&["symmetry-check", s(&flat), "--affine", "2", "--shift", "1", "--samples", "20"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let (header, _) = table(&out);
    assert_eq!(header.last().unwrap(), "status");

    assert_eq!(code(&run(&["symmetry-check", s(&flat), "--samples", "5"])), 2);
}

#[test]
fn symmetry_check_reads_jet_maps() {
    let dir = tempfile::tempdir().unwrap();
    let flat = write_temp(&dir, "flat.json", r#"{"coords": ["u1", "u2"], "n": 1}"#);
    let out = run(&["symmetry-check", s(&flat), "--jet-map", s(&spec("shear.json")), "--samples", "20"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    // the same map on E³ has the wrong dimension
    let out = run(&["symmetry-check", s(&spec("flat3.json")), "--jet-map", s(&spec("shear.json"))]);
    assert_eq!(code(&out), 2);
}

#[test]
fn out_flag_writes_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("inv.csv");
    let out = run(&["invariants", s(&spec("sphere.json")), "--out", s(&target)]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    assert!(std::fs::read_to_string(&target).unwrap().starts_with("table,index,expression"));
}

#[test]
fn selftest_is_deterministic_and_honours_tolerance() {
    let a = run(&["selftest", "--samples", "4"]);
    let b = run(&["selftest", "--samples", "4"]);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 11);

    let strict = run(&["selftest", "--samples", "4", "--tol", "1e-30"]);
    assert_eq!(code(&strict), 1);
    assert!(stdout(&strict).contains("FAIL"));

    assert_eq!(code(&run(&["selftest", "--tol", "-1"])), 2);
    assert_eq!(code(&run(&["selftest", "--samples", "0"])), 2);
}

#[test]
fn bad_arguments_exit_with_two() {
    assert_eq!(code(&run(&["geodesic"])), 2);
    assert_eq!(code(&run(&["residual", "a", "b", "--mode", "sideways"])), 2);
    assert_eq!(code(&run(&["nonsense"])), 2);
}
