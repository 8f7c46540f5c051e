use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["mw-slice"];
    argv.extend_from_slice(args);
    let code = mw_slice::cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn run_json(args: &[&str]) -> (i32, Value, String) {
    let mut argv = vec!["--json"];
    argv.extend_from_slice(args);
    let (code, out, raw) = run(&argv);
    let v: Value = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}"));
    let again = mw_slice::cli::render_json(&v);
    assert_eq!(again.trim_end(), out.trim_end(), "JSON does not round-trip");
    assert_no_floats(&v);
    (code, v, raw)
}

fn assert_no_floats(v: &Value) {
    match v {
        Value::Number(n) => assert!(n.is_i64() || n.is_u64(), "float {n}"),
        Value::Array(xs) => xs.iter().for_each(assert_no_floats),
        Value::Object(m) => m.values().for_each(assert_no_floats),
        _ => {}
    }
}

#[test]
fn filtration_over_reals() {
    let (code, out, _) = run(&["filtration", "--field", "R", "--n", "3", "--p", "0", "--q", "0"]);
    assert_eq!(code, 0);
    assert!(out.contains("signature ∈ 8ℤ, rank 0"), "{out}");
    let (_, v, _) = run_json(&["filtration", "--field", "R", "--n", "3", "--p", "0", "--q", "0"]);
    assert_eq!(v["command"], "filtration");
    assert_eq!(v["result"]["N"], 3);
    assert_eq!(v["result"]["subgroup"]["description"], "signature ∈ 8ℤ, rank 0");
    assert_eq!(v["input"]["n"], 3);
}

#[test]
fn negative_indices_parse() {
    let (code, v, _) = run_json(&["filtration", "--field", "Fq(5)", "--n", "-2", "--p", "-3", "--q", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["degree"], 4);
}

#[test]
fn moore_is_constant() {
    let (code, out, _) = run(&["moore", "--field", "R", "--ell", "3", "--n", "7"]);
    assert_eq!(code, 0);
    assert!(out.contains("Z/3"));
    let (code, _, err) = run(&["moore", "--field", "R", "--ell", "2", "--n", "7"]);
    assert_eq!(code, 2);
    assert!(err.contains("ell"));
}

#[test]
fn derive_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.json");
    let p = path.to_str().unwrap();
    let (code, v, _) = run_json(&["mw-derive", "--field", "Fq(7)", "--units", "3,3,2", "--out", p]);
    assert_eq!(code, 0);
    assert_eq!(v["certificate"]["replayed"], true);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written, v);

    let (code, out, _) = run(&["mw-verify", p]);
    assert_eq!(code, 0, "{out}");

    // bare derivation works too, and a tampered one is rejected
    let mut bare = v["result"].clone();
    std::fs::write(&path, bare.to_string()).unwrap();
    assert_eq!(run(&["mw-verify", p]).0, 0);
    bare["steps"][0]["bindings"]["v"] = Value::String("4".into());
    std::fs::write(&path, bare.to_string()).unwrap();
    let (code, _, err) = run(&["mw-verify", p]);
    assert_eq!(code, 1);
    assert!(err.contains("step 0"), "{err}");
}

#[test]
fn derive_with_negative_units() {
    let (code, v, _) = run_json(&["mw-derive", "--field", "R", "--units", "-1,1,1"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["end"], "0");
}

#[test]
fn fault_injection_fails_verification() {
    let (code, _, err) = run(&["--fault", "steinberg", "mw-derive", "--field", "Fq(7)", "--units", "3,3,2"]);
    assert_eq!(code, 1);
    assert!(err.contains("tuple [3,3,2]"), "{err}");
    let (code, _, err) = run(&["--fault", "steinberg", "check-all", "--profile", "quick"]);
    assert_eq!(code, 1);
    assert!(err.contains("criterion 4") && err.contains("tuple"), "{err}");
}

#[test]
fn parse_and_domain_errors_exit_two() {
    assert_eq!(run(&["gw", "--field", "Fq(4)", "<1>"]).0, 2);
    assert_eq!(run(&["gw", "--field", "Fq(7)", "<1,0>"]).0, 2);
    assert_eq!(run(&["mw-normalize", "--field", "R", "[2] + eta"]).0, 2);
    assert_eq!(run(&["mw-derive", "--field", "Fq(7)", "--units", "3,3,3"]).0, 2);
    assert_eq!(run(&["transfer", "--ext", "Fq(25)/Fq(3)"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn gw_and_witt_tables() {
    let (code, v, _) = run_json(&["gw", "--field", "R", "<1,-1,2>", "<-1>"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["product"]["class"]["signature"], -1);
    assert_eq!(v["result"]["sum"]["class"]["rank"], 4);
    let (code, out, _) = run(&["witt", "--field", "Fq(7)", "<1,1>"]);
    assert_eq!(code, 0);
    assert!(out.contains("Z/4") && out.contains("2 mod 4"), "{out}");
    let (_, v, _) = run_json(&["gw", "--field", "R", "<1/2,-3/4>"]);
    assert_eq!(v["input"]["forms"][0], "<1/2,-3/4>");
}

#[test]
fn graded_convergence_and_transfer() {
    let (_, v, _) = run_json(&["graded", "--field", "Fq(5)", "--n", "1", "--p", "0", "--q", "0"]);
    assert_eq!(v["result"]["graded"], "Z/2");
    let (code, v, _) = run_json(&["convergence", "--field", "R", "--cutoff", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["certificate"]["kind"], "two_adic_valuation");
    let (code, v, _) = run_json(&["transfer", "--ext", "C/R"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["transfer"]["rank"], 2);
    assert_eq!(v["result"]["transfer"]["signature"], 0);
    let (code, v, _) = run_json(&["transfer", "--ext", "Fq(9)/Fq(3)", "--check", "--rank-bound", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["certificate"]["projection_formula"]["passed"], true);
}

#[test]
fn binary_reads_profile_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_mw-slice"))
        .args(["--json", "check-all"])
        .env("MW_SLICE_PROFILE", "quick")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["input"]["profile"], "quick");
    assert_eq!(v["result"]["criteria"].as_array().unwrap().len(), 11);

    let out = Command::new(env!("CARGO_BIN_EXE_mw-slice"))
        .args(["check-all"])
        .env("MW_SLICE_PROFILE", "bogus")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
