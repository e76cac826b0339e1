use std::process::Command;

use serde_json::Value;

fn rado(args: &[&str]) -> (i32, Value) {
    rado_env(args, None)
}

fn rado_env(args: &[&str], budget: Option<&str>) -> (i32, Value) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rado"));
    cmd.args(args).env_remove("RADO_BUDGET");
    if let Some(b) = budget {
        cmd.env("RADO_BUDGET", b);
    }
    let out = cmd.output().expect("binary runs");
    let doc = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    });
    (out.status.code().unwrap(), doc)
}

fn tmp(name: &str) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("rado-cli-{}-{name}", std::process::id()))
}

#[test]
fn cc_and_verify_round_trip() {
    let (code, doc) = rado(&["cc", "--matrix", "[[1,1,-1]]"]);
    assert_eq!(code, 0);
    assert_eq!(doc["status"], "PR-with-witness");
    assert_eq!(doc["evidence"]["kind"], "columns_condition");
    let path = tmp("verdict.json");
    std::fs::write(&path, doc.to_string()).unwrap();
    let (code, check) = rado(&["verify", "--document", path.to_str().unwrap()]);
    assert_eq!((code, &check["sound"]), (0, &Value::Bool(true)));
}

#[test]
fn tampered_verdict_is_rejected() {
    let (_, mut doc) = rado(&["cc", "--matrix", "[[1,1,-1]]"]);
    doc["matrix"]["rows"][0][2] = Value::from("-2");
    let (code, check) = rado(&["verify", "--document", &doc.to_string()]);
    assert_eq!(code, 1);
    assert_eq!(check["sound"], false);
}

#[test]
fn refute_then_verify_with_window() {
    let (code, cert) = rado(&["refute", "--matrix", "[[1,1,-3]]"]);
    assert_eq!(code, 0);
    assert_eq!(cert["p"], 5);
    let path = tmp("cert.json");
    std::fs::write(&path, cert.to_string()).unwrap();
    let (code, check) = rado(&["verify", "--document", path.to_str().unwrap(), "--window", "positive:200"]);
    assert_eq!(code, 0);
    assert_eq!(check["search"]["found"], false);
    let mut bad = cert.clone();
    bad["p"] = Value::from(7);
    let (code, check) = rado(&["verify", "--document", &bad.to_string()]);
    assert_eq!((code, &check["sound"]), (1, &Value::Bool(false)));
}

#[test]
fn search_finds_schur_triples() {
    let (code, doc) = rado(&["search", "--matrix", "[[1,1,-1]]", "--colouring", "cp:3", "--window", "positive:10"]);
    assert_eq!(code, 0);
    assert_eq!(doc["solution"], serde_json::json!(["1", "3", "4"]));
    let chi = r#"{"kind":"residue","ring":"Z","modulus":"4"}"#;
    let (_, doc) = rado(&["search", "--matrix", "[[1,1,-1]]", "--colouring", chi, "--window", r#"{"kind":"symmetric","n":5}"#]);
    assert_eq!(doc["found"], true);
}

#[test]
fn witness_outcomes_and_exit_codes() {
    let (code, doc) = rado(&["witness", "--matrix", "[[1,1,-1]]", "--colours", "2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["set"], serde_json::json!([1, 2, 3, 4, 5]));
    let (code, doc) = rado_env(&["witness", "--matrix", "[[1,1,-3]]", "--colours", "4"], Some("100000"));
    assert_eq!(code, 2);
    assert_eq!(doc["outcome"], "budget_exhausted");
}

#[test]
fn nonhom_integer_and_algebra() {
    let (code, doc) = rado(&["nonhom", "--matrix", "[[3,-1]]", "--b", "[2]"]);
    assert_eq!(code, 0);
    assert_eq!(doc["status"], "PR-with-witness");
    assert_eq!(doc["constant"], "1");
    let (_, doc) = rado(&["nonhom", "--ring", "Z", "--module", "mod:6", "--matrix", "[[1,1]]", "--b", "[2]"]);
    assert_eq!(doc["status"], "PR-with-witness");
    let (_, doc) = rado(&["nonhom", "--ring", "Z", "--module", "mod:6", "--matrix", "[[1,1]]", "--b", "[1]"]);
    assert_eq!(doc["status"], "NotPR-with-refutation");
    let e = |i: usize| {
        let mut v = vec![0; 10];
        v[i] = 1;
        v
    };
    let a = serde_json::json!([[e(1), e(2)], [e(2), e(1)]]).to_string();
    let b = serde_json::json!([e(0), e(0)]).to_string();
    let (code, doc) = rado(&["nonhom", "--fixture", "nonprincipal-h", "--matrix", &a, "--b", &b]);
    assert_eq!(code, 0);
    assert_eq!(doc["criterion"], "computed_zero");
}

#[test]
fn hmodule_reports() {
    let (code, doc) = rado(&["hmodule", "--fixture", "paper-example", "--p", "3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["dim_h"], 1);
    assert_eq!(doc["representative"][0]["value"], "xz");
    let identity: Vec<Vec<u64>> = (0..10).map(|i| (0..10).map(|j| u64::from(i == j)).collect()).collect();
    let (_, doc) = rado(&["hmodule", "--fixture", "nonprincipal-h", "--map", &serde_json::to_string(&identity).unwrap(), "--base-change"]);
    assert_eq!(doc["functoriality"]["induced_rank"], 2);
    assert_eq!(doc["base_change"]["equal"], true);
}

#[test]
fn input_errors_exit_one_with_a_pointer() {
    let (code, doc) = rado(&["cc", "--matrix", "[[1,\"a\"]]"]);
    assert_eq!(code, 1);
    assert_eq!(doc["error"]["pointer"], "/matrix/0/1");
    let (code, doc) = rado(&["cc", "--ring", "mod:0", "--matrix", "[[1]]"]);
    assert_eq!(code, 1);
    assert!(doc["error"]["pointer"].as_str().unwrap().starts_with("/ring"));
    let (code, _) = rado(&["cc", "--matrix", "/nonexistent/file.json"]);
    assert_eq!(code, 1);
    let (code, _) = rado(&["frobnicate"]);
    assert_eq!(code, 1);
    let (code, _) = rado_env(&["cc", "--matrix", "[[1,1,-1]]"], Some("lots"));
    assert_eq!(code, 0, "cc does not consult the budget");
    let (code, doc) = rado_env(&["search", "--matrix", "[[1,1,-1]]", "--colouring", "cp:3", "--window", "positive:5"], Some("lots"));
    assert_eq!(code, 1);
    assert_eq!(doc["error"]["pointer"], "$RADO_BUDGET");
}

#[test]
fn unsupported_inputs_exit_two() {
    let row: Vec<i64> = vec![1; 21];
    let (code, doc) = rado(&["cc", "--matrix", &serde_json::to_string(&[row]).unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(doc["status"], "Unknown-unsupported");
    let e = |i: usize| {
        let mut v = vec![0; 10];
        v[i] = 1;
        v
    };
    let a = serde_json::json!([[e(1), e(2)], [e(2), e(1)]]).to_string();
    let b = serde_json::json!([e(0), e(0)]).to_string();
    let (code, doc) = rado_env(&["nonhom", "--fixture", "nonprincipal-h", "--matrix", &a, "--b", &b], Some("10"));
    assert_eq!(code, 2, "{doc}");
}

#[test]
fn output_flag_writes_a_file() {
    let path = tmp("out.json");
    let out = Command::new(env!("CARGO_BIN_EXE_rado"))
        .args(["--output", path.to_str().unwrap(), "cc", "--ring", "gf:3", "--matrix", "[[1,1,1]]"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["ring"], "gf:3");
}

fn conforms(kind: &str, doc: &Value) {
    let root: Value = serde_json::from_str(include_str!("../../../schema/rado.schema.json")).unwrap();
    let schema = serde_json::json!({"$schema": root["$schema"], "$defs": root["$defs"], "$ref": format!("#/$defs/{kind}")});
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| format!("{}: {e}", e.instance_path())).collect();
    assert!(errors.is_empty(), "{kind} document fails the schema: {errors:?}\n{doc}");
}

#[test]
fn emitted_documents_follow_the_schema() {
    let m = "[[1,1,-1]]";
    for (ring, matrix) in [("Z", m), ("Z", "[[1,1,-3]]"), ("mod:4", "[[1,1,1]]"), ("mod:4[x]", "[[1,2]]"), ("prod:4:inf", "[[1,1,2]]")] {
        let (_, v) = rado(&["cc", "--ring", ring, "--matrix", matrix]);
        conforms("verdict", &v);
        conforms("verify_input", &v);
    }
    let (_, cert) = rado(&["refute", "--matrix", "[[1,1,-3]]"]);
    conforms("certificate", &cert);
    let (_, report) = rado(&["verify", "--document", &cert.to_string()]);
    conforms("verify_report", &report);
    let (_, s) = rado(&["search", "--matrix", m, "--colouring", "cp:3", "--window", "positive:10"]);
    conforms("search_report", &s);
    let (_, w) = rado(&["witness", "--matrix", m]);
    conforms("witness_outcome", &w);
    let (_, w) = rado_env(&["witness", "--matrix", "[[1,1,-3]]", "--colours", "4", "--max", "8"], Some("1000"));
    conforms("witness_outcome", &w);
    let (_, n) = rado(&["nonhom", "--matrix", "[[2,2]]", "--b", "[6]"]);
    conforms("nonhom_verdict", &n);
    let (_, h) = rado(&["hmodule", "--fixture", "nonprincipal-h", "--base-change"]);
    conforms("hmodule_report", &h);
    let (_, e) = rado(&["cc", "--matrix", "[[1,\"a\"]]"]);
    conforms("error", &e);
}

#[test]
fn schema_violations_carry_instance_paths() {
    let (code, doc) = rado(&["search", "--matrix", "[[1,1,-1]]", "--colouring", "cp:2", "--window", r#"{"kind":"positive","n":-1}"#]);
    assert_eq!(code, 1);
    assert_eq!(doc["error"]["pointer"], "/window/n");
    let (code, doc) = rado(&["cc", "--matrix", r#"{"ring":"Z","rows":[[1],7]}"#]);
    assert_eq!(code, 1);
    assert!(doc["error"]["pointer"].as_str().unwrap().starts_with("/matrix"));
    let (code, _) = rado(&["verify", "--document", r#"{"status":"PR-with-witness"}"#]);
    assert_eq!(code, 1);
}
