use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

use selfext_cli::{Status, VerificationReport};
use selfext_core::instances::{mt4, mt5, mt6};
use selfext_core::json::{mat_from_json, problem_from_json};
use selfext_core::rational::{parse_rational, rat};
use selfext_core::{min_norm_extension, ExtensionProblem, PolyhedralSpace, Subspace};

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name).to_string_lossy().into_owned()
}

fn selfext(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_selfext")).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

/// Runs with `--out FILE` and returns the exit code and parsed document.
fn selfext_json(dir: &Path, args: &[&str]) -> (i32, Value) {
    let path = dir.join("out.json");
    let _ = std::fs::remove_file(&path);
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_string_lossy().into_owned();
    full.extend(["--out", &p]);
    let (code, _, err) = selfext(&full);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("no output written; stderr: {err}"));
    (code, serde_json::from_str(&text).unwrap())
}

/// Small budgets so the suite runs in a few seconds.
fn quick_config(dir: &Path) -> PathBuf {
    let path = dir.join("quick.toml");
    std::fs::write(
        &path,
        "[budgets]\ngrid = 300\nr3_instances = 50\nfunctional_instances = 40\noperator_instances = 20\nembedding_vectors = 50\n",
    )
    .unwrap();
    path
}

#[test]
fn extend_mt4_reaches_five_quarters() {
    let dir = tempfile::tempdir().unwrap();
    let mt4_file = data("mt4.json");
    let (code, doc) = selfext_json(dir.path(), &["extend", "--space", "l1:4", "--subspace", "sum-zero", "--op", &mt4_file]);
    assert_eq!(code, 0);
    assert_eq!(doc["schema"], 1);
    let value = parse_rational(doc["value"].as_str().unwrap()).unwrap();
    assert!(value >= rat(5, 4));
    assert_eq!(doc["certificate"]["bound"], doc["value"]);
}

#[test]
fn extend_accepts_problem_documents() {
    let dir = tempfile::tempdir().unwrap();
    let (code, doc) = selfext_json(dir.path(), &["extend", "--problem", &data("mt5.json")]);
    assert_eq!(code, 0);
    assert_eq!(doc["value"], "4/3");
}

#[test]
fn shipped_data_matches_builtin_operators() {
    for (file, op) in [("mt4.json", mt4()), ("mt5.json", mt5()), ("mt6.json", mt6())] {
        let doc: Value = serde_json::from_str(&std::fs::read_to_string(data(file)).unwrap()).unwrap();
        assert_eq!(mat_from_json(&doc["op"]).unwrap(), op, "{file}");
        let p = problem_from_json(&doc).unwrap();
        let x = PolyhedralSpace::l1(op.rows() + 1);
        assert_eq!(p, ExtensionProblem::new(x.clone(), Subspace::sum_zero(x).unwrap(), op).unwrap());
    }
}

#[test]
fn opnorm_of_mt6_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let (code, doc) =
        selfext_json(dir.path(), &["opnorm", "--space", "l1:6", "--subspace", "sum-zero", "--op", &data("mt6.json")]);
    assert_eq!(code, 0);
    assert_eq!(doc["norm"], "1");
    let (code, stdout, _) = selfext(&["opnorm", "--space", "l1:6", "--subspace", "sum-zero", "--op", "mt6"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("norm   1"), "{stdout}");
}

#[test]
fn embed_l1_3_is_four_by_three() {
    let dir = tempfile::tempdir().unwrap();
    let (code, doc) = selfext_json(dir.path(), &["embed", "--from", "l1:3"]);
    assert_eq!(code, 0);
    let m = mat_from_json(&doc["matrix"]).unwrap();
    assert_eq!((m.rows(), m.cols()), (4, 3));
    assert!(m.to_rows().iter().flatten().all(|x| *x == rat(1, 1) || *x == rat(-1, 1)));
    assert_eq!(doc["to"], "linf:4");
}

#[test]
fn human_output_shows_decimals() {
    let (code, stdout, _) = selfext(&["extend", "--space", "l1:4", "--subspace", "sum-zero", "--op", "mt4"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("5/4 (≈ 1.250000)"), "{stdout}");
}

#[test]
fn usage_and_input_errors_exit_two() {
    let (code, _, err) = selfext(&["extend", "--space", "l1:4", "--bogus"]);
    assert_eq!(code, 2);
    assert!(err.contains("Usage"), "{err}");
    let (code, _, _) = selfext(&["embed", "--from", "l7:3"]);
    assert_eq!(code, 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"[["1/0", "0"], ["0", "1"]]"#).unwrap();
    let (code, _, err) = selfext(&["opnorm", "--space", "l1:2", "--op", &bad.to_string_lossy()]);
    assert_eq!(code, 2);
    assert!(err.contains("zero denominator"), "{err}");
    let wrong_schema = dir.path().join("schema.json");
    std::fs::write(&wrong_schema, r#"{"schema": 9, "op": [["1"]]}"#).unwrap();
    let (code, _, _) = selfext(&["opnorm", "--space", "l1:1", "--op", &wrong_schema.to_string_lossy()]);
    assert_eq!(code, 2);
}

#[test]
fn r3_extend_with_trace() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.json");
    std::fs::write(&t, r#"[["1", "1/2"], ["-1/3", "2"]]"#).unwrap();
    let (code, doc) = selfext_json(dir.path(), &["r3-extend", "--hyperplane", "1,2,-1", "--op", &t.to_string_lossy(), "--trace"]);
    assert_eq!(code, 0);
    assert_eq!(doc["value"], doc["t_norm"]);
    assert_eq!(doc["case"], "generic");
    assert!(doc["trace"]["w"].is_array());
    let f = dir.path().join("f.json");
    std::fs::write(&f, r#"["1", "2", "-1"]"#).unwrap();
    let (code, again) = selfext_json(dir.path(), &["r3-extend", "--functional", &f.to_string_lossy(), "--op", &t.to_string_lossy()]);
    assert_eq!(code, 0);
    assert_eq!(again["value"], doc["value"]);
}

#[test]
fn lyapunov_gap_from_flags() {
    let dir = tempfile::tempdir().unwrap();
    let (code, doc) = selfext_json(dir.path(), &["lyapunov", "--norm", "l1:4", "--w", "sum-zero", "--f", "mt4"]);
    assert_eq!(code, 0);
    assert_eq!(doc["induced_norm"], "1");
    assert_eq!(doc["decays"], false);
    assert!(parse_rational(doc["q_norm"].as_str().unwrap()).unwrap() >= rat(5, 4));
}

#[test]
fn search_strategies() {
    let dir = tempfile::tempdir().unwrap();
    let (code, doc) = selfext_json(
        dir.path(),
        &["se-search", "--space", "l1:3", "--subspace", "kernel:1,1,1", "--strategy", "grid", "--budget", "81"],
    );
    assert_eq!(code, 0);
    assert_eq!(doc["best_ratio"], "1");
    assert_eq!(doc["candidates_evaluated"], 80);

    let cands = dir.path().join("cands.json");
    let shipped: Value = serde_json::from_str(&std::fs::read_to_string(data("mt4.json")).unwrap()).unwrap();
    let identity = serde_json::json!([["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]);
    std::fs::write(&cands, serde_json::json!([identity, shipped["op"]]).to_string()).unwrap();
    let (code, doc) = selfext_json(
        dir.path(),
        &["se-search", "--space", "l1:4", "--strategy", "fixed", "--candidates", &cands.to_string_lossy(), "--budget", "5"],
    );
    assert_eq!(code, 0, "{doc}");
    assert_eq!(doc["best_ratio"], "5/4");
    assert_eq!(mat_from_json(&doc["witness"]).unwrap(), mt4());

    let (a, b) = (
        selfext_json(dir.path(), &["se-search", "--space", "l1:4", "--strategy", "random", "--budget", "10", "--seed", "3"]).1,
        selfext_json(dir.path(), &["se-search", "--space", "l1:4", "--strategy", "random", "--budget", "10", "--seed", "3", "--sequential"]).1,
    );
    assert_eq!(a, b);
}

#[test]
fn extend_functional_matches_subspace_norm() {
    let dir = tempfile::tempdir().unwrap();
    let (code, doc) = selfext_json(
        dir.path(),
        &["extend-functional", "--space", "linf:3", "--subspace", "kernel:1,1,1", "--functional", "1,-1/2"],
    );
    assert_eq!(code, 0);
    assert_eq!(doc["norm"], doc["subspace_norm"]);
}

#[test]
fn lp_solve_document() {
    let dir = tempfile::tempdir().unwrap();
    let lp = dir.path().join("lp.json");
    std::fs::write(
        &lp,
        r#"{"objective": ["-1", "-1"],
            "constraints": [{"coeffs": ["1", "2"], "relation": "<=", "rhs": "4"},
                            {"coeffs": ["3", "1"], "relation": "<=", "rhs": "6"}],
            "lower": ["0", "0"]}"#,
    )
    .unwrap();
    let (code, doc) = selfext_json(dir.path(), &["lp", "solve", "--input", &lp.to_string_lossy()]);
    assert_eq!(code, 0);
    assert_eq!(doc["status"], "optimal");
    assert_eq!(doc["objective_value"], "-14/5");
    assert_eq!(doc["primal"], serde_json::json!(["8/5", "6/5"]));
}

#[test]
fn verify_paper_full_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let (code, _, err) = selfext(&["verify-paper", "--out", &path.to_string_lossy()]);
    let text = std::fs::read_to_string(&path).unwrap();
    let report = VerificationReport::from_json(&text).unwrap();
    assert_eq!(code, 0, "{text}\n{err}");
    assert!(report.passed());
    assert_eq!(format!("{}\n", report.to_json()), text, "report does not round-trip byte for byte");

    let r4 = report.checks.iter().find(|c| c.name == "r4_lower_bound").unwrap();
    assert_eq!(r4.claimed, "≥ 5/4");
    let x = PolyhedralSpace::l1(4);
    let direct = min_norm_extension(&ExtensionProblem::new(x.clone(), Subspace::sum_zero(x).unwrap(), mt4()).unwrap()).unwrap();
    assert_eq!(parse_rational(&r4.computed).unwrap(), direct.value);
    assert!(report.checks.iter().all(|c| !c.reference.is_empty()));
    let names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
}

#[test]
fn tampered_operator_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let config = quick_config(dir.path());
    let tampered = dir.path().join("tampered.json");
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(data("mt4.json")).unwrap()).unwrap();
    doc["op"][0][0] = Value::String("-1/2".into());
    std::fs::write(&tampered, doc.to_string()).unwrap();
    let over = format!("r4={}", tampered.to_string_lossy());
    let (code, report) = selfext_json(dir.path(), &["verify-paper", "--config", &config.to_string_lossy(), "--override", &over]);
    assert_eq!(code, 1);
    assert_eq!(report["status"], "fail");
    let cert = report["checks"].as_array().unwrap().iter().find(|c| c["name"] == "r4_hand_certificate").unwrap();
    assert_eq!(cert["status"], "fail");
    assert_ne!(cert["computed"], "5/4");
    let norm = report["checks"].as_array().unwrap().iter().find(|c| c["name"] == "r4_operator_norm").unwrap();
    assert_eq!(norm["status"], "fail");
}

#[test]
fn seeds_and_parallelism_do_not_change_statuses() {
    let dir = tempfile::tempdir().unwrap();
    let config = quick_config(dir.path());
    let cfg = config.to_string_lossy().into_owned();
    let statuses = |extra: &[&str]| -> Vec<(String, Status)> {
        let mut args = vec!["verify-paper", "--config", &cfg];
        args.extend_from_slice(extra);
        let (code, doc) = selfext_json(dir.path(), &args);
        assert_eq!(code, 0, "{doc}");
        let report: VerificationReport = serde_json::from_value(doc).unwrap();
        report.checks.into_iter().map(|c| (c.name, c.status)).collect()
    };
    let one = statuses(&["--seed", "1"]);
    assert_eq!(one, statuses(&["--seed", "2"]));
    assert_eq!(one, statuses(&["--seed", "1", "--parallel"]));
}

#[test]
fn config_seed_is_overridden_by_flag() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.toml");
    std::fs::write(&config, "seed = 11\n[budgets]\nsearch = 7\n").unwrap();
    let cfg = config.to_string_lossy().into_owned();
    let (_, doc) = selfext_json(dir.path(), &["--config", &cfg, "se-search", "--space", "l1:4", "--strategy", "random"]);
    assert_eq!(doc["seed"], 11);
    assert_eq!(doc["candidates_evaluated"], 7);
    let (_, doc) = selfext_json(dir.path(), &["--config", &cfg, "se-search", "--space", "l1:4", "--strategy", "random", "--seed", "4", "--budget", "3"]);
    assert_eq!(doc["seed"], 4);
    assert_eq!(doc["candidates_evaluated"], 3);

    std::fs::write(&config, "sede = 1\n").unwrap();
    let (code, _, err) = selfext(&["--config", &cfg, "embed", "--from", "l1:2"]);
    assert_eq!(code, 2);
    assert!(err.contains("bad config"), "{err}");
}
