use core::f64::consts::PI;
use debranges_cli::io::read_csv;
use debranges_cli::Report;
use debranges_core::{Complex64, HbSpec};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_debranges"))
        .args(args)
        .env_remove("DEBRANGES_TOL")
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, serde_json::to_string(v).unwrap()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not a report ({e}): {}",
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn two_zero_spec() -> Value {
    json!({ "exp_rate": 0.0, "zeros": [[0.0, -1.0], [1.0, -2.0]] })
}

#[test]
fn bounds_on_paley_wiener() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "s_pi.json", &json!({ "exp_rate": PI }));
    let out = run(&["bounds", "--p", "2", "--spec", s(&spec)]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let b = &r["result"]["bounds"];
    // K(2)² = √π Γ(3/2) / Γ(2) = π/2, and the bound is (φ'/2)^{1/2} / K(2) with φ' = 2π
    let k2 = (PI / 2.0).sqrt();
    assert!((b["k_p"].as_f64().unwrap() - k2).abs() <= 1e-14);
    assert!((b["c_bound"].as_f64().unwrap() - 2f64.sqrt()).abs() <= 1e-14);
    assert!((b["phase_sup"].as_f64().unwrap() - 2.0 * PI).abs() <= 1e-14);
    assert_eq!(r["passed"], json!(true));
}

#[test]
fn hormander_passes_for_a_rotation() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "spec.json", &two_zero_spec());
    let rotation = json!({ "kind": "rotation_real_part", "spec": two_zero_spec(), "beta": 0.3 });
    let f = write(&dir, "f.json", &rotation);
    let minus_f = write(
        &dir,
        "minus_f.json",
        &json!({ "kind": "combination", "terms": [[-1.0, rotation]] }),
    );

    let csv = dir.path().join("margin.csv");
    let out = run(&[
        "verify-hormander",
        "--spec",
        s(&spec),
        "--f",
        s(&f),
        "--sign-free",
        "--csv",
        s(&csv),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(report(&out)["failed_invariants"], json!([]));
    let (header, rows) = read_csv(&csv).unwrap();
    assert_eq!(header, ["x", "margin"]);
    assert!(!rows.is_empty());

    // the signed form needs f(ξ) > 0, which holds for exactly one of ±f
    let codes: Vec<Option<i32>> = [&f, &minus_f]
        .iter()
        .map(|g| {
            run(&["verify-hormander", "--spec", s(&spec), "--f", s(g)])
                .status
                .code()
        })
        .collect();
    assert!(
        codes.contains(&Some(0)) && codes.contains(&Some(2)),
        "{codes:?}"
    );
}

#[test]
fn bad_input_exits_with_two() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("missing.json");
    assert_eq!(
        run(&["phase", "--spec", s(&missing)]).status.code(),
        Some(2)
    );

    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{ not json").unwrap();
    assert_eq!(
        run(&["phase", "--spec", s(&garbage)]).status.code(),
        Some(2)
    );

    // a zero in the upper half-plane is not Hermite-Biehler
    let upper = write(
        &dir,
        "upper.json",
        &json!({ "exp_rate": 0.0, "zeros": [[0.0, 1.0]] }),
    );
    assert_eq!(run(&["phase", "--spec", s(&upper)]).status.code(), Some(2));

    assert_eq!(run(&["bounds"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(&["bounds", "--p", "0", "--spec", s(&upper)])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn failed_assertion_exits_with_one() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "spec.json", &two_zero_spec());
    // no quadrature agrees with the closed form to 1e-300
    let out = run(&[
        "bounds",
        "--p",
        "3",
        "--spec",
        s(&spec),
        "--tol-for",
        "k_p=1e-300",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["passed"], json!(false));
    assert_eq!(
        r["failed_invariants"],
        json!(["k_p_quadrature_vs_closed_form"])
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("k_p_quadrature_vs_closed_form"));
}

#[test]
fn report_round_trips_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let spec = write(
        &dir,
        "spec.json",
        &json!({ "exp_rate": 0.0, "zeros": vec![[0.0, -1.0]; 4] }),
    );
    let path = dir.path().join("report.json");
    let args = [
        "extremal",
        "--spec",
        s(&spec),
        "--p",
        "2",
        "--xi",
        "0",
        "--out",
        s(&path),
    ];
    assert_eq!(run(&args).status.code(), Some(0));
    let first = std::fs::read_to_string(&path).unwrap();
    let parsed: Report = serde_json::from_str(&first).unwrap();
    let again: Value = serde_json::to_value(&parsed).unwrap();
    let original: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(again, original);

    assert_eq!(run(&args).status.code(), Some(0));
    let second = std::fs::read_to_string(&path).unwrap();
    let strip = |t: &str| {
        let mut v: Value = serde_json::from_str(t).unwrap();
        v.as_object_mut().unwrap().remove("wall_time_seconds");
        v
    };
    assert_eq!(strip(&first), strip(&second));

    // (z+i)^4 with quadratic basis at ξ = 0: the extremal is even
    let zeros: Vec<f64> =
        serde_json::from_value(original["result"]["solution"]["zeros"].clone()).unwrap();
    let mut mirrored: Vec<f64> = zeros.iter().map(|z| -z).collect();
    mirrored.sort_by(f64::total_cmp);
    for (a, b) in zeros.iter().zip(&mirrored) {
        assert!((a - b).abs() <= 1e-8, "{zeros:?}");
    }
}

#[test]
fn phase_csv_matches_the_library() {
    let dir = TempDir::new().unwrap();
    let spec_json = two_zero_spec();
    let spec_path = write(&dir, "spec.json", &spec_json);
    let csv = dir.path().join("phase.csv");
    let out = run(&[
        "phase",
        "--spec",
        s(&spec_path),
        "--window",
        "-5,5",
        "--csv",
        s(&csv),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = read_csv(&csv).unwrap();
    assert_eq!(
        header,
        ["x", "phi", "phi_prime", "abs_e", "theta_re", "theta_im"]
    );
    assert_eq!(rows.len(), 1001);

    let spec =
        HbSpec::polynomial(vec![Complex64::new(0.0, -1.0), Complex64::new(1.0, -2.0)]).unwrap();
    let profile = spec.profile();
    let mut last = f64::NEG_INFINITY;
    for row in &rows {
        let v: Vec<f64> = row.iter().map(|c| c.unwrap()).collect();
        let x = v[0];
        // full-precision cells survive the text round trip exactly
        assert_eq!(v[1], profile.phase(x));
        assert_eq!(v[2], spec.phase_derivative(x));
        assert_eq!(v[3], spec.abs_at(x));
        assert!(v[1] > last);
        last = v[1];
        let theta = Complex64::new(v[4], v[5]);
        assert!((theta - Complex64::from_polar(1.0, v[1])).norm() <= 1e-12);
    }
}

#[test]
fn separation_reports_gap_scales() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "spec.json", &two_zero_spec());
    let problem = write(
        &dir,
        "problem.json",
        &json!({
            "p": 2.0,
            "spec": { "exp_rate": 0.0, "zeros": [[0.0, -1.0], [1.0, -2.0], [-1.0, -0.5], [2.0, -1.5]] },
            "xi": 0.5,
            "basis": { "kind": "polynomial", "degree": 2 }
        }),
    );
    let out = run(&["separation", "--problem", s(&problem)]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = report(&out);
    assert_eq!(r["passed"], json!(true));
    // --problem fixes the spec already
    let out = run(&["separation", "--problem", s(&problem), "--spec", s(&spec)]);
    assert_eq!(out.status.code(), Some(2));
}
