use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use shlr_cli::dsl::{parse_model, print_model};

fn examples() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples");
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "shlr"))
        .collect();
    files.sort();
    assert!(files.len() >= 4, "bundled examples missing");
    files
}

fn example(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

fn shlr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shlr"))
        .args(args)
        .env_remove("SHLR_WEIGHT_CUTOFF")
        .env_remove("SHLR_OUTPUT")
        .output()
        .unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.extend(["--output", "json"]);
    let out = shlr(&a);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad JSON from {args:?}: {e}\n{}", String::from_utf8_lossy(&out.stdout))
    });
    (out.status.code().unwrap(), v)
}

fn temp_model(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("shlr-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn bundled_files_are_print_parse_fixpoints() {
    for f in examples() {
        let text = std::fs::read_to_string(&f).unwrap();
        let ast = parse_model(&text).unwrap();
        assert_eq!(print_model(&ast), text, "{} is not canonical", f.display());
        assert_eq!(parse_model(&print_model(&ast)).unwrap(), ast);
    }
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for f in examples() {
        let f = f.to_str().unwrap();
        for cmd in ["check-d2", "ce", "extract-brackets", "cohomology", "cylinder", "weq", "dualize"] {
            let a = shlr(&[cmd, f, "--output", "json"]);
            let b = shlr(&[cmd, f, "--output", "json"]);
            assert_eq!(a.stdout, b.stdout, "{cmd} on {f}");
            assert_eq!(a.status.code(), b.status.code());
        }
    }
}

#[test]
fn report_keys_are_sorted_and_schema_versioned() {
    let out = shlr(&["check-d2", example("lie2.shlr").to_str().unwrap(), "--output", "json"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema"], 1);
    assert!(v.get("timing_ms").is_none());
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    let first = |k: &str| text.find(&format!("\"{k}\"")).unwrap();
    assert!(first("command") < first("config") && first("config") < first("schema"));
}

#[test]
fn check_d2_passes_on_the_lie_algebra() {
    let (code, v) = json(&["check-d2", example("lie2.shlr").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["verdicts"]["d_squared"], "pass");
    assert_eq!(v["result"]["algebra"]["differential"][0]["value"], "-e1'*e2'");
}

#[test]
fn cylinder_at_weight_zero_has_empty_log() {
    for f in examples() {
        let (code, v) = json(&["cylinder", f.to_str().unwrap(), "--weight-cutoff", "0"]);
        assert_eq!(code, 0, "{}: {v}", f.display());
        assert_eq!(v["result"]["obstruction_log"], Value::Array(vec![]));
        assert_eq!(v["config"]["weight_cutoff"], 0);
    }
}

#[test]
fn weq_on_identity_is_true() {
    let (code, v) = json(&["weq", example("lie2.shlr").to_str().unwrap(), "--morphism", "id"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdicts"]["weak_equivalence"], "true");
}

#[test]
fn pushout_of_acyclic_cofibration() {
    let (code, v) = json(&["pushout", example("pushout.shlr").to_str().unwrap(), "--morphism", "f", "--with", "g"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["verdicts"]["gamma_weq"], "true");
}

#[test]
fn lift_covers_the_target_module() {
    let (code, v) = json(&["lift", example("lift.shlr").to_str().unwrap(), "--morphism", "p", "--object", "N"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["verdicts"]["covers_target"], "pass");
}

#[test]
fn undeclared_bracket_argument_is_a_positioned_error() {
    let p = temp_model(
        "undeclared.shlr",
        "algebra k {\n}\n\nmodule L over k {\n  e1 : 0;\n}\n\nbrackets L {\n  [e1, e9] = e1;\n}\n",
    );
    let (code, v) = json(&["check-d2", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "unknown-name");
    assert_eq!(v["error"]["line"], 9);
    assert_eq!(v["error"]["col"], 8);
}

#[test]
fn positive_algebra_degree_is_rejected() {
    let p = temp_model("positive.shlr", "algebra A {\n  x : 1;\n}\n");
    let (code, v) = json(&["check-d2", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "degree");
    assert_eq!(v["error"]["line"], 2);
}

#[test]
fn failing_verdict_exits_with_one() {
    let p = temp_model(
        "nonjacobi.shlr",
        "algebra k {\n}\n\nmodule L over k {\n  e1 : 0;\n  e2 : 0;\n  e3 : 0;\n}\n\nbrackets L {\n  [e1, e2] = e3;\n  [e1, e3] = e1;\n}\n",
    );
    let (code, v) = json(&["check-d2", p.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["verdicts"]["d_squared"], "fail");
    assert_eq!(v["result"]["square_zero"]["failure"]["weight"], 2);
}

#[test]
fn environment_mirrors_flags() {
    let out = Command::new(env!("CARGO_BIN_EXE_shlr"))
        .args(["check-d2", example("lie2.shlr").to_str().unwrap()])
        .env("SHLR_WEIGHT_CUTOFF", "2")
        .env("SHLR_DEGREE_WINDOW", "-3:1")
        .env("SHLR_OUTPUT", "json")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["weight_cutoff"], 2);
    assert_eq!(v["config"]["degree_window"], "-3:1");
}

#[test]
fn flags_override_the_config_block() {
    let (_, v) = json(&["cohomology", example("module.shlr").to_str().unwrap(), "--degree-window", "-2:2"]);
    assert_eq!(v["config"]["degree_window"], "-2:2");
    assert_eq!(v["config"]["weight_cutoff"], 2);
}

#[test]
fn text_output_lists_verdicts() {
    let out = shlr(&["check-d2", example("action.shlr").to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("verdicts:\n  d_squared: pass\n"), "{text}");
}

#[test]
fn timing_is_opt_in() {
    let (_, v) = json(&["check-d2", example("lie2.shlr").to_str().unwrap(), "--timing"]);
    assert!(v["timing_ms"].is_u64());
}

#[test]
fn usage_errors_exit_with_two() {
    let out = shlr(&["frobnicate", example("lie2.shlr").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let (code, v) = json(&["weq", example("action.shlr").to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "usage");
}
