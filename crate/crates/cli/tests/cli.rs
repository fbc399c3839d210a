//! End-to-end tests driving the compiled binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_evp"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

/// Two means, two ways, two goals; the asymmetric-cost allocation sample.
fn allocation_scenario() -> String {
    serde_json::json!({
        "version": "1",
        "instance": {
            "explicit": {
                "means": ["a", "b"],
                "quasimetric": [[0.0, 1.0], [2.0, 0.0]],
                "ways": ["w1", "w2"],
                "feasible": [[0], [0, 1]],
                "payoffs": [[[2.0, 2.0], null], [[1.0, 1.0], [1.0, 0.0]]],
                "ordering": {"anchors": [{"point": [0.0, 0.0], "cone": {
                    "normals": [[1.0, 0.0], [0.0, 1.0]],
                    "generators": [[1.0, 0.0], [0.0, 1.0]]}}]},
                "theta": {"normals": [[1.0, 0.0], [0.0, 1.0]],
                           "generators": [[1.0, 0.0], [0.0, 1.0]]}
            }
        },
        "params": {
            "eps": 1.0, "lambda": 1.0,
            "xi": [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2],
            "start": {"x": 0, "omega": 0}
        }
    })
    .to_string()
}

/// Three points on a line with scalar costs 3, 1, 0.
fn line_scenario() -> String {
    serde_json::json!({
        "version": "1",
        "instance": {
            "explicit": {
                "means": ["0", "1", "2"],
                "quasimetric": [[0.0, 1.0, 2.0], [1.0, 0.0, 1.0], [2.0, 1.0, 0.0]],
                "ways": ["w"],
                "feasible": [[0], [0], [0]],
                "payoffs": [[[3.0]], [[1.0]], [[0.0]]],
                "ordering": {"anchors": [{"point": [0.0], "cone": {
                    "normals": [[1.0]], "generators": [[1.0]]}}]},
                "theta": {"normals": [[1.0]], "generators": [[1.0]]}
            }
        },
        "params": {
            "eps": 1.0, "lambda": 1.0, "xi": [1.0],
            "start": {"x": 0, "omega": 0}
        }
    })
    .to_string()
}

#[test]
fn solve_reports_the_trap_and_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write(dir.path(), "alloc.json", &allocation_scenario());
    let out_dir = dir.path().join("out");

    let out = run(&["solve", scenario.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("(b, w2)"), "{text}");
    assert!(text.contains("path length: 1"), "{text}");

    let csv = std::fs::read_to_string(out_dir.join("trajectory.csv")).unwrap();
    let lines: Vec<&str> = csv.trim_end().lines().collect();
    assert_eq!(lines[0], "n,x,omega,f_1,f_2,q_step,W_size,radius");
    assert_eq!(lines.len(), 2); // one step plus the header

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["result"]["x_label"], "b");
    assert_eq!(report["result"]["omega_label"], "w2");
}

#[test]
fn certify_passes_on_a_valid_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write(dir.path(), "alloc.json", &allocation_scenario());
    let out = run(&["certify", scenario.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("overall: PASS"), "{text}");
    assert!(text.contains("arrival"), "{text}");
    assert!(text.contains("variational-trap"), "{text}");
}

#[test]
fn certify_rejects_a_corrupted_claim_naming_the_relation() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write(dir.path(), "alloc.json", &allocation_scenario());
    let out_dir = dir.path().join("out");
    let out = run(&["solve", scenario.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert!(out.status.success());

    // corrupt the claimed endpoint: (b, w1) instead of (b, w2)
    let report_path = out_dir.join("report.json");
    let mut report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    report["result"]["omega"] = serde_json::json!(0);
    report["result"]["omega_label"] = serde_json::json!("w1");
    report["result"]["f"] = serde_json::json!([1.0, 1.0]);
    std::fs::write(&report_path, report.to_string()).unwrap();

    let out = run(&[
        "certify",
        scenario.to_str().unwrap(),
        "--report",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("[FAIL    ] stability"), "{text}");
    assert!(text.contains("[FAIL    ] pareto-end"), "{text}");
}

#[test]
fn traps_prints_the_trap_set() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write(dir.path(), "line.json", &line_scenario());
    let out = run(&["traps", scenario.to_str().unwrap(), "--ratio", "1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("{2}"), "{}", stdout(&out));
}

#[test]
fn validate_fails_with_exit_one_on_broken_hypotheses() {
    let dir = tempfile::tempdir().unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&line_scenario()).unwrap();
    v["instance"]["explicit"]["quasimetric"] =
        serde_json::json!([[0.0, 1.0, 50.0], [1.0, 0.0, 1.0], [50.0, 1.0, 0.0]]);
    let scenario = write(dir.path(), "broken.json", &v.to_string());
    let out = run(&["validate", scenario.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("quasimetric-axioms"), "{}", stdout(&out));
    assert!(stdout(&out).contains("overall: FAIL"));
}

#[test]
fn schema_errors_exit_two_with_field_paths() {
    let dir = tempfile::tempdir().unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&line_scenario()).unwrap();
    v["instance"]["explicit"]["quasimetric"][0][1] = serde_json::json!(-3.0);
    let scenario = write(dir.path(), "bad.json", &v.to_string());
    let out = run(&["validate", scenario.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("instance.explicit.quasimetric[0][1]"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn gen_round_trips_with_an_identical_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let out_file = dir.path().join("gen.json");
    let out = run(&["gen", "--seed", "42", "--out", out_file.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));

    let first = run(&["validate", out_file.to_str().unwrap()]);
    assert!(first.status.success(), "{}", stdout(&first));
    let second = run(&["validate", out_file.to_str().unwrap()]);
    assert_eq!(stdout(&first), stdout(&second));
}

#[test]
fn sweep_covers_the_ratio_direction_grid() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write(dir.path(), "alloc.json", &allocation_scenario());
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let xis = write(
        dir.path(),
        "xis.json",
        &serde_json::json!([[s, s], [1.0, 0.0]]).to_string(),
    );
    let out_dir = dir.path().join("out");

    let out = run(&[
        "sweep",
        scenario.to_str().unwrap(),
        "--ratios",
        "0.5,1,4",
        "--xis",
        xis.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    let text = stdout(&out);
    // (1,0) is on the boundary of the common cone, so it solves too;
    // six cells in total
    let csv = std::fs::read_to_string(out_dir.join("sweep.csv")).unwrap();
    assert_eq!(csv.trim_end().lines().count(), 1 + 6, "{text}");
    assert!(text.contains("ratio 4"), "{text}");
    // at a high enough ratio the start no longer moves
    assert!(text.lines().any(|l| l.contains("ratio 4") && l.contains("(a, w1)")), "{text}");
}

#[test]
fn resource_scenario_solves_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let text = serde_json::json!({
        "version": "1",
        "instance": {
            "resource": {
                "d": 1, "activities": 2,
                "grid": [[0.0, 1.0, 2.0]],
                "rules": [
                    {"linear": {"omega_coeff": [2.0]}},
                    {"quadratic_target": {"target": [1.0], "weight": 1.0}}
                ],
                "up_cost": 1.0, "down_cost": 2.0
            }
        },
        "params": {
            "eps": 1.0, "lambda": 1.0,
            "xi": [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2],
            "start": {"x": 2, "omega": 4}
        }
    })
    .to_string();
    let scenario = write(dir.path(), "resource.json", &text);
    let out = run(&["certify", scenario.to_str().unwrap()]);
    assert!(out.status.success(), "{} {}", stdout(&out), stderr(&out));
    assert!(stdout(&out).contains("overall: PASS"));
}
