//! End-to-end tests of the `fforge` binary: report layouts, exit codes,
//! diagnostics, and determinism, exercised through real process invocations.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> String {
    format!("{}/../../geometries/{}", env!("CARGO_MANIFEST_DIR"), name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fforge"))
        .args(args)
        .output()
        .expect("spawn fforge")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn json_ok(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "expected success for {args:?}, got {:?}\nstderr: {}",
        out.status.code(),
        stderr_of(&out)
    );
    serde_json::from_str(&stdout_of(&out)).expect("stdout parses as JSON")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("process exited with a code")
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("fforge-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).expect("write temp file");
    path
}

#[test]
fn eval_reports_are_deterministic_for_a_fixed_seed() {
    let input = corpus("minkowski.geom");
    let args = ["eval", "--input", &input, "--samples", "10", "--seed", "3"];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout, "same seed must reproduce the report byte for byte");
}

#[test]
fn eval_reports_exact_metric_values_at_a_chosen_point() {
    let input = corpus("minkowski.geom");
    let report = json_ok(&[
        "eval",
        "--input",
        &input,
        "--which",
        "metric",
        "--at",
        "0,4,1.5707963267948966,0,1,0,0,0",
    ]);
    let result = &report["results"][0];
    assert_eq!(result["l"].as_f64().unwrap(), 1.0);
    let metric = &result["metric"];
    assert_eq!(metric["t.t"].as_f64().unwrap(), 1.0);
    assert_eq!(metric["r.r"].as_f64().unwrap(), -1.0);
    assert_eq!(metric["t.r"].as_f64().unwrap(), 0.0);
    assert!((metric["theta.theta"].as_f64().unwrap() + 16.0).abs() < 1e-12);
    assert!((metric["phi.phi"].as_f64().unwrap() + 16.0).abs() < 1e-12);
}

#[test]
fn eval_rejects_unknown_channels() {
    let input = corpus("minkowski.geom");
    let out = run(&["eval", "--input", &input, "--which", "bogus"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr_of(&out).contains("unknown field `bogus`"));
}

#[test]
fn eval_rejects_malformed_ranges() {
    let input = corpus("minkowski.geom");
    let out = run(&["eval", "--input", &input, "--range", "zz=1..2"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr_of(&out).contains("unknown coordinate `zz`"));

    let out = run(&["eval", "--input", &input, "--range", "r=5..2"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr_of(&out).contains("need lo < hi"));
}

#[test]
fn eval_explicit_point_outside_the_domain_is_a_runtime_error() {
    let input = corpus("schwarzschild.geom");
    let out = run(&["eval", "--input", &input, "--at", "0,0.5,1.5,0,1,0,0,0"]);
    assert_eq!(exit_code(&out), 3);
    assert!(stderr_of(&out).contains("outside the domain"));
}

#[test]
fn missing_input_file_is_an_input_error() {
    let out = run(&["eval", "--input", "geometries/does-not-exist.geom"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr_of(&out).starts_with("fforge: cannot read"));
}

#[test]
fn parse_diagnostics_carry_file_and_position() {
    let path = temp_file("bad.geom", "name: bad\nparam a = 1\nL: dt^2 - rs/r\n");
    let out = run(&["eval", "--input", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    let err = stderr_of(&out);
    assert!(
        err.contains(":3:11: unknown identifier `rs`"),
        "diagnostic should carry line and column: {err}"
    );
}

#[test]
fn classify_tags_the_reference_profiles() {
    let schw = corpus("schwarzschild.kprof");
    let report = json_ok(&["classify", "--input", &schw]);
    assert_eq!(report["class"], "Riemannian");
    assert_eq!(report["metrizable"], true);

    let mink = corpus("minkowski.kprof");
    let report = json_ok(&["classify", "--input", &mink, "--at", "0,4"]);
    assert_eq!(report["class"], "one-variable");
    assert_eq!(report["flatness"].as_f64().unwrap(), 0.0);
    assert_eq!(report["metrizable"], true);
}

#[test]
fn classify_recognizes_a_power_law_profile() {
    // A connection whose twelve coefficients are the case-1 linear forms in
    // two free functions k4, k10 with structure constants a = b = c = 1.
    let profile = "\
name: class1-synthetic
k1: (1 + 0.3*t + 0.2*r) - 2*(0.1 + 0.05*t*r)
k2: 2*(0.1 + 0.05*t*r)
k3: 2*(1 + 0.3*t + 0.2*r) - 2*(0.1 + 0.05*t*r)
k4: 0.1 + 0.05*t*r
k5: (0.1 + 0.05*t*r) + (1 + 0.3*t + 0.2*r)
k6: (1 + 0.3*t + 0.2*r) - (0.1 + 0.05*t*r)
k7: 1 + 0.3*t + 0.2*r
k8: 1 + 0.3*t + 0.2*r
k9: 2*(1 + 0.3*t + 0.2*r)
k10: 1 + 0.3*t + 0.2*r
";
    let path = temp_file("class1.kprof", profile);
    let report = json_ok(&["classify", "--input", path.to_str().unwrap(), "--at", "0.3,1.5"]);
    assert_eq!(report["class"], "power-law");
    let s = &report["structure"];
    for key in ["a", "b", "c"] {
        assert!((s[key].as_f64().unwrap() - 1.0).abs() < 1e-12, "structure {key}");
    }
    assert!(report["exponent"].as_f64().unwrap().is_finite());
    assert!((report["rho"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn classify_tags_profiles_without_angular_coefficients() {
    let profile = "name: tr-only\nk1: 0.4\nk2: 0.1*t\nk4: 0.3 + 0.1*r\nk5: 0.2\n";
    let path = temp_file("group2.kprof", profile);
    let report = json_ok(&["classify", "--input", path.to_str().unwrap(), "--at", "0.3,1.5"]);
    assert_eq!(report["class"], "Class4/5 group");
    assert!(report["structure"].is_null());
}

#[test]
fn birkhoff_scan_confirms_the_obstruction() {
    let report = json_ok(&["birkhoff", "--draws", "40", "--seed", "9"]);
    assert_eq!(report["verdict"], "confirmed");
    assert_eq!(report["survivors"].as_array().unwrap().len(), 0);
    assert_eq!(report["total_draws"].as_u64().unwrap(), 7 * 40);

    let families = report["families"].as_array().unwrap();
    assert_eq!(families.len(), 7);
    for family in families {
        let draws = family["draws"].as_u64().unwrap();
        let accounted = family["flat"].as_u64().unwrap()
            + family["pseudo_riemannian"].as_u64().unwrap()
            + family["inconsistent"].as_u64().unwrap()
            + family["undecided"].as_u64().unwrap();
        assert_eq!(accounted, draws, "family {} draws unaccounted", family["family"]);
        assert_eq!(family["survivors"].as_u64().unwrap(), 0);
    }

    let flat = families.iter().find(|f| f["family"] == "flat").unwrap();
    assert_eq!(flat["flat"], flat["draws"]);

    let angular_zero = families.iter().find(|f| f["family"] == "angular-zero").unwrap();
    assert_eq!(angular_zero["inconsistent"], angular_zero["draws"]);
    let trace = angular_zero["sample_trace"].as_str().unwrap();
    assert!(trace.contains("-1 != 0"), "trace should show the contradiction: {trace}");
}

#[test]
fn birkhoff_requires_at_least_one_draw() {
    let out = run(&["birkhoff", "--draws", "0"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr_of(&out).contains("--draws must be at least 1"));
}

#[test]
fn geodesic_circular_preset_holds_radius_and_speed() {
    let input = corpus("schwarzschild.geom");
    let report = json_ok(&["geodesic", "--input", &input, "--circular", "4", "--tau", "50"]);
    assert_eq!(report["termination"], "tau-limit");
    assert!((report["l_initial"].as_f64().unwrap() - 0.625).abs() < 1e-12);
    assert!(report["max_l_drift"].as_f64().unwrap() < 1e-8);
    let final_position = report["final_position"].as_array().unwrap();
    assert!((final_position[1].as_f64().unwrap() - 4.0).abs() < 1e-6);
}

#[test]
fn geodesic_writes_a_trajectory_csv() {
    let input = corpus("schwarzschild.geom");
    let path = std::env::temp_dir().join(format!("fforge-cli-{}-orbit.csv", std::process::id()));
    let out = run(&[
        "geodesic",
        "--input",
        &input,
        "--circular",
        "4",
        "--tau",
        "5",
        "--trajectory",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let csv = std::fs::read_to_string(&path).expect("trajectory file written");
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("tau,t,r,theta,phi,dt,dr,dtheta,dphi,l"));
    let rows: Vec<Vec<f64>> = lines
        .map(|line| line.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert!(rows.len() >= 2, "at least the initial and final samples");
    assert_eq!(rows[0][0], 0.0, "trajectory starts at tau = 0");
    assert_eq!(rows[0][2], 4.0, "trajectory starts on the requested radius");
    let last = rows.last().unwrap();
    assert!((last[0] - 5.0).abs() < 1e-12, "trajectory ends at the requested tau");
    assert!((last[2] - 4.0).abs() < 1e-6, "circular orbit holds its radius");
}

#[test]
fn geodesic_rejects_conflicting_or_malformed_initial_data() {
    let input = corpus("schwarzschild.geom");
    let out = run(&[
        "geodesic",
        "--input",
        &input,
        "--initial",
        "0,6,1.5,0,1,0,0,0.05",
        "--circular",
        "4",
    ]);
    assert_eq!(exit_code(&out), 2);

    let out = run(&["geodesic", "--input", &input, "--initial", "0,1,2"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr_of(&out).contains("needs 8 comma-separated values"));
}

#[test]
fn check_passes_the_reference_geometries() {
    let input = corpus("minkowski.geom");
    let report = json_ok(&["check", "--input", &input, "--samples", "40"]);
    assert_eq!(report["pass"], true);
    let invariants = report["invariants"].as_array().unwrap();
    let names: Vec<&str> = invariants.iter().map(|i| i["name"].as_str().unwrap()).collect();
    assert_eq!(
        names,
        [
            "homogeneity",
            "euler-degree",
            "metric-contraction",
            "cartan-transversality",
            "torsion-free",
            "metric-compatibility",
            "cartan-trace-duality",
            "rotation-invariance",
            "berwald",
            "landsberg-trace",
        ]
    );
    for invariant in invariants {
        assert_eq!(invariant["pass"], true, "invariant {} failed", invariant["name"]);
    }
}

#[test]
fn check_flags_a_non_berwald_perturbation() {
    let spec = "name: perturbed\ndomain: r\nL: dt^2 - dr^2 - r^2*w^2 + 0.1*dr^4/(dt^2 + dr^2)\n";
    let path = temp_file("perturbed.geom", spec);
    let out = run(&["check", "--input", path.to_str().unwrap(), "--samples", "40"]);
    assert_eq!(exit_code(&out), 5);
    assert!(stderr_of(&out).contains("invariant(s) failed"));

    // The report is still emitted so the failure can be inspected.
    let report: Value = serde_json::from_str(&stdout_of(&out)).expect("report with failures");
    assert_eq!(report["pass"], false);
    let failing: Vec<&str> = report["invariants"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|i| i["pass"] == false)
        .map(|i| i["name"].as_str().unwrap())
        .collect();
    assert_eq!(failing, ["berwald", "landsberg-trace"]);
}

#[test]
fn reports_can_be_mirrored_to_a_file() {
    let input = corpus("minkowski.geom");
    let base = ["eval", "--input", &input, "--samples", "3", "--seed", "5"];
    let stdout = stdout_of(&run(&base));

    let path = std::env::temp_dir().join(format!("fforge-cli-{}-report.json", std::process::id()));
    let mut with_output: Vec<&str> = base.to_vec();
    let path_str = path.to_str().unwrap().to_owned();
    with_output.extend(["--output", &path_str]);
    let out = run(&with_output);
    assert!(out.status.success());

    let written = std::fs::read_to_string(&path).expect("report file written");
    assert_eq!(written, stdout, "--output must mirror the stdout report");
}

#[test]
fn eval_csv_has_the_documented_header() {
    let input = corpus("minkowski.geom");
    let out = run(&[
        "eval",
        "--input",
        &input,
        "--which",
        "metric,ricci",
        "--samples",
        "2",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let header = text.lines().next().unwrap();
    assert_eq!(
        header,
        "index,t,r,theta,phi,dt,dr,dtheta,dphi,l,\
         metric.t.t,metric.t.r,metric.t.theta,metric.t.phi,\
         metric.r.r,metric.r.theta,metric.r.phi,\
         metric.theta.theta,metric.theta.phi,metric.phi.phi,ricci"
    );
    assert_eq!(text.lines().count(), 3, "header plus one row per sample");
}
