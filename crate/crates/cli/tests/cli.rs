//! End-to-end tests of the command-line surface: exit-code contract,
//! determinism, format switches and the report schema.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ellbounds"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

/// Minimal structural validator for the subset of JSON Schema the published
/// schema uses: object/required/properties, arrays with items, enums, type
/// unions and numeric bounds.
fn validate(schema: &serde_json::Value, instance: &serde_json::Value, path: &str) {
    if let Some(types) = schema.get("type") {
        let allowed: Vec<String> = match types {
            serde_json::Value::String(s) => vec![s.clone()],
            serde_json::Value::Array(a) => {
                a.iter().map(|v| v.as_str().unwrap().to_string()).collect()
            }
            _ => panic!("schema type must be string or array"),
        };
        let actual = match instance {
            serde_json::Value::Null => "null",
            serde_json::Value::Bool(_) => "boolean",
            serde_json::Value::Number(n) => {
                if n.is_i64() || n.is_u64() {
                    "integer"
                } else {
                    "number"
                }
            }
            serde_json::Value::String(_) => "string",
            serde_json::Value::Array(_) => "array",
            serde_json::Value::Object(_) => "object",
        };
        let matches = allowed
            .iter()
            .any(|t| t == actual || (t == "number" && actual == "integer"));
        assert!(matches, "{path}: type {actual} not in {allowed:?}");
    }
    if let Some(required) = schema.get("required").and_then(|r| r.as_array()) {
        for key in required {
            let key = key.as_str().unwrap();
            assert!(
                instance.get(key).is_some(),
                "{path}: missing required field {key}"
            );
        }
    }
    if let Some(props) = schema.get("properties").and_then(|p| p.as_object()) {
        for (key, subschema) in props {
            if let Some(value) = instance.get(key) {
                validate(subschema, value, &format!("{path}.{key}"));
            }
        }
    }
    if let Some(items) = schema.get("items") {
        if let Some(arr) = instance.as_array() {
            for (i, value) in arr.iter().enumerate() {
                validate(items, value, &format!("{path}[{i}]"));
            }
        }
    }
    if let Some(allowed) = schema.get("enum").and_then(|e| e.as_array()) {
        assert!(allowed.contains(instance), "{path}: {instance} not in enum");
    }
    if let Some(min) = schema.get("minLength").and_then(|m| m.as_u64()) {
        let s = instance.as_str().expect("minLength on a string");
        assert!(s.len() >= min as usize, "{path}: string shorter than {min}");
    }
}

#[test]
fn verify_report_validates_against_published_schema() {
    let schema_text = std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas/verify-report.schema.json"),
    )
    .expect("schema file present");
    let schema: serde_json::Value = serde_json::from_str(&schema_text).unwrap();
    let out = run(&["verify", "--d", "3", "--p", "2", "--lambda", "1"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    validate(&schema, &report, "$");
    // anchors nonempty on every check (also enforced by the schema minLength)
    for r in report["results"].as_array().unwrap() {
        assert!(!r["anchors"].as_str().unwrap().is_empty());
    }
}

#[test]
fn verify_exit_code_contract() {
    let ok = run(&["verify", "--d", "3", "--p", "0.5"]);
    assert!(ok.status.success());
    let bad = run(&[
        "verify",
        "--d",
        "3",
        "--p",
        "0",
        "--lambda",
        "2",
        "--inject-perturbation",
        "0.1",
    ]);
    assert!(!bad.status.success(), "perturbed run must exit nonzero");
    let report: serde_json::Value = serde_json::from_str(&stdout(&bad)).unwrap();
    let energy = report["results"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["name"] == "energy.identity")
        .expect("energy check present");
    assert_eq!(energy["status"]["kind"], "Fail");
}

#[test]
fn verify_selection_inapplicable_is_not_failure() {
    // a selected family that is inapplicable in the regime exits 0
    let out = run(&["verify", "--d", "3", "--p", "0.5", "--select", "lower.pc"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["summary"]["fail"], 0);
    assert_eq!(report["summary"]["inapplicable"], 1);
}

#[test]
fn dimension_guard_rejected_with_nonzero_exit() {
    let out = run(&["constants", "--d", "2", "--p", "1"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("dimension"));
}

#[test]
fn reports_are_deterministic() {
    let args = [
        "verify", "--d", "4", "--p", "0.5", "--lambda", "4", "--u0", "5",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(
        stdout(&a),
        stdout(&b),
        "same config must give byte-identical reports"
    );
}

#[test]
fn constants_report_carries_table_reasons() {
    let out = run(&["constants", "--d", "3", "--p", "1"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let entries = report["report"]["entries"].as_array().unwrap();
    let upper = entries
        .iter()
        .find(|e| e["name"] == "absolute_upper")
        .unwrap();
    assert_eq!(upper["applicable"], false);
    assert!(upper["detail"].as_str().unwrap().starts_with("No"));
    let lower = entries
        .iter()
        .find(|e| e["name"] == "absolute_lower")
        .unwrap();
    assert_eq!(lower["applicable"], false);
}

#[test]
fn solve_exports_closed_form_rows() {
    let out = run(&[
        "solve", "--d", "3", "--p", "5", "--lambda", "3", "--u0", "1", "--r-max", "3", "--rows",
        "40",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("# residual-certificate"));
    let mut checked = 0;
    for line in text.lines().skip_while(|l| !l.starts_with("r,")).skip(1) {
        let cols: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        let (r, u) = (cols[0], cols[1]);
        let want = (1.0 + r * r).powf(-0.5);
        assert!((u - want).abs() < 1e-7, "row r={r}: {u} vs {want}");
        checked += 1;
    }
    assert_eq!(checked, 40);
}

#[test]
fn solve_notes_truncation_at_positivity() {
    // p = 0, λ = 8, d = 4: positivity radius exactly 1 < r-max
    let out = run(&[
        "solve", "--d", "4", "--p", "0", "--lambda", "8", "--u0", "1", "--r-max", "2",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("truncated at the positivity radius"));
}

#[test]
fn q0_scan_minimizer_and_monotone_eps() {
    let out = run(&["q0-scan", "--eps", "0.1", "--step", "0.01"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let minline = text.lines().find(|l| l.contains("minimizer")).unwrap();
    let d: f64 = minline
        .split("d=")
        .nth(1)
        .unwrap()
        .split(',')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!(d > 5.0 && d < 6.0, "minimizer at {d}");

    // doubling eps shrinks every q0 value
    let doubled = run(&["q0-scan", "--eps", "0.2", "--step", "0.5"]);
    let base = run(&["q0-scan", "--eps", "0.1", "--step", "0.5"]);
    let parse_rows = |s: &str| -> Vec<(f64, f64)> {
        s.lines()
            .filter(|l| !l.starts_with('#') && !l.starts_with("d,"))
            .map(|l| {
                let mut it = l.split(',');
                (
                    it.next().unwrap().parse().unwrap(),
                    it.next().unwrap().parse().unwrap(),
                )
            })
            .collect()
    };
    for ((d1, q1), (d2, q2)) in parse_rows(&stdout(&base))
        .iter()
        .zip(parse_rows(&stdout(&doubled)).iter())
    {
        assert_eq!(d1, d2);
        assert!(q2 < q1, "q0 not decreasing in eps at d={d1}");
    }
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = std::env::temp_dir().join(format!("ellbounds-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg_path = dir.join("config.json");
    std::fs::write(
        &cfg_path,
        r#"{"d":3,"p":2.0,"lambda":1.0,"u0":1.0,"tol":1e-10}"#,
    )
    .unwrap();
    let out = run(&[
        "verify",
        "--config",
        cfg_path.to_str().unwrap(),
        "--p",
        "0.5",
        "--select",
        "harnack",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["config"]["p"], 0.5, "flag must override the file");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn atomic_output_file() {
    let dir = std::env::temp_dir().join(format!("ellbounds-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = run(&[
        "verify",
        "--d",
        "3",
        "--p",
        "0",
        "--lambda",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(report["summary"]["fail"] == 0);
    assert!(
        !dir.join("report.tmp").exists(),
        "temp file must be renamed away"
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn perturbation_at_p_equal_one_is_a_solution() {
    // the equation is linear at p = 1: a scaled solution still solves it,
    // so the negative control cannot (and must not) trip there
    let out = run(&[
        "verify",
        "--d",
        "3",
        "--p",
        "1",
        "--inject-perturbation",
        "0.1",
    ]);
    assert!(out.status.success());
}

#[test]
fn at_the_sobolev_exponent_everything_is_inapplicable() {
    // p = p_s exactly: the open-interval regime guards switch every check off
    let out = run(&["verify", "--d", "3", "--p", "5", "--lambda", "1"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["summary"]["fail"], 0);
    assert_eq!(report["summary"]["pass"], 0);
    for r in report["results"].as_array().unwrap() {
        assert_eq!(
            r["status"]["kind"], "Inapplicable",
            "{} ran at p = p_s",
            r["name"]
        );
    }
}

#[test]
fn sweep_small_grid_aggregates() {
    let out = run(&[
        "sweep",
        "--d-grid",
        "3",
        "--p-grid",
        "0,1",
        "--lambda-grid",
        "1",
        "--u0-grid",
        "1",
        "--scale-grid",
        "1,0.8",
        "--jobs",
        "2",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["points"].as_array().unwrap().len(), 4);
    assert_eq!(report["aggregate"]["fail"], 0);
    assert_eq!(report["errors"], 0);
}
