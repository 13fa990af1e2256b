use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qtsym(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtsym"))
        .arg("--cache-dir")
        .arg(cache)
        .args(args)
        .env_remove("QTSYM_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn run_ok(cache: &Path, args: &[&str]) -> String {
    let o = qtsym(cache, args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

/// JSON output with the run-dependent timing removed.
fn stable_json(cache: &Path, args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let mut v: Value = serde_json::from_str(&run_ok(cache, &full)).expect("valid json");
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

fn golden(name: &str, actual: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, serde_json::to_string_pretty(actual).unwrap() + "\n").unwrap();
    }
    let expected: Value = serde_json::from_str(&fs::read_to_string(&path).expect("golden file")).unwrap();
    assert_eq!(&expected, actual, "golden mismatch for {name}");
}

#[test]
fn eval_scalar_plethysm() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_ok(dir.path(), &["eval", "e[2][(1-u)/(1-q)]"]);
    assert_eq!(out.trim(), "(-u + q + u^2 - q*u)/(1 - q - q^2 + q^3)");
    assert_eq!(run_ok(dir.path(), &["eval", "pair(h[1],m[1])"]).trim(), "1");
}

#[test]
fn golden_outputs() {
    let dir = tempfile::tempdir().unwrap();
    golden("eval_h11.json", &stable_json(dir.path(), &["eval", "H[1,1]"]));
    golden("eval_q_binomial.json", &stable_json(dir.path(), &["eval", "e[3][(q^3-1)/(q-1)]"]));
    golden("eval_hh2.json", &stable_json(dir.path(), &["eval", "HH(2)", "--max-degree", "3"]));
    golden("macdonald_21.json", &stable_json(dir.path(), &["macdonald", "--lambda", "2,1"]));
    golden("check_corollary.json", &stable_json(dir.path(), &["check", "corollary", "--lambda", "2", "--k", "3"]));
    golden("hlv_pair.json", &stable_json(dir.path(), &["hlv", "pair", "--args", "h[1];h[1];h[1]"]));
}

#[test]
fn json_is_schema_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = stable_json(dir.path(), &["eval", "pLog(pExp(X*Y))", "--max-degree", "3"]);
    let b = stable_json(dir.path(), &["eval", "pLog(pExp(X*Y))", "--max-degree", "3"]);
    assert_eq!(a, b);
    assert_eq!(a["kind"], "series");
    assert_eq!(a["order"], 3);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| qtsym(dir.path(), args).status.code();
    assert_eq!(code(&["eval", "1 + 1"]), Some(0));
    assert_eq!(code(&["eval", "pLog(2 + X)"]), Some(1));
    assert_eq!(code(&["eval", "1 + * 2"]), Some(2));
    assert_eq!(code(&["frobnicate"]), Some(2));
    assert_eq!(code(&["macdonald", "--lambda", "1,2"]), Some(2));
    assert_eq!(code(&["check", "theorem7", "--lambda", "1", "--mu", "2"]), Some(2));
    assert_eq!(code(&["check", "stability", "--k", "1"]), Some(2));
}

#[test]
fn syntax_errors_report_the_span() {
    let dir = tempfile::tempdir().unwrap();
    let o = qtsym(dir.path(), &["eval", "h[2,1] + )"]);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("9..10"), "{err}");
    assert!(err.contains("expected"), "{err}");
}

#[test]
fn checks_pass() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_ok(dir.path(), &["check", "ght", "--lambda", "2,1", "--max-degree", "5"]);
    assert!(out.starts_with("PASS ght lambda=(2,1)"), "{out}");
    let out = run_ok(dir.path(), &["check", "polynomiality", "--k", "3", "--max-degree", "3"]);
    assert!(out.contains("PASS polynomiality k=3"));
    assert!(out.contains("[[1],[1],[1]] 1"), "coefficients are listed: {out}");
    let out = run_ok(dir.path(), &["check", "duality", "--size", "2"]);
    assert!(!out.contains("FAIL"));
}

#[test]
fn latex_format() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_ok(dir.path(), &["--format", "latex", "eval", "1/(1-q)"]);
    assert_eq!(out.trim(), "\\frac{1}{1 - q}");
}

fn stats(dir: &Path) -> Value {
    stable_json(dir, &["cache", "stats"])
}

#[test]
fn cache_warm_stats_clear() {
    let dir = tempfile::tempdir().unwrap();
    let first = stable_json(dir.path(), &["cache", "warm", "--max-degree", "5"]);
    assert_eq!(first["result"]["computed"], serde_json::json!([0, 1, 2, 3, 4, 5]));
    let s = stats(dir.path());
    let counts: Vec<u64> = s["result"]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["polynomials"].as_u64().unwrap())
        .collect();
    assert_eq!(counts, vec![1, 1, 2, 3, 5, 7]);

    let again = stable_json(dir.path(), &["cache", "warm", "--max-degree", "5"]);
    assert_eq!(again["result"]["computed"], serde_json::json!([]));

    run_ok(dir.path(), &["cache", "clear"]);
    assert_eq!(stats(dir.path())["result"]["entries"], serde_json::json!([]));
}

#[test]
fn warm_and_cold_runs_agree() {
    let cold = tempfile::tempdir().unwrap();
    let args = ["check", "specializations", "--size", "4"];
    let a = run_ok(cold.path(), &args);
    let warm = tempfile::tempdir().unwrap();
    run_ok(warm.path(), &["cache", "warm", "--max-degree", "4"]);
    let b = run_ok(warm.path(), &args);
    assert_eq!(a, b);
    let c = run_ok(warm.path(), &["--no-cache"].iter().chain(&args).copied().collect::<Vec<_>>());
    assert_eq!(a, c);
}

#[test]
fn corrupt_files_are_quarantined() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(dir.path(), &["cache", "warm", "--max-degree", "3"]);
    let expected = run_ok(dir.path(), &["eval", "H[2,1]"]);

    fs::write(dir.path().join("macdonald_n03.json"), "{ not json").unwrap();
    let f2 = dir.path().join("macdonald_n02.json");
    let tampered = fs::read_to_string(&f2).unwrap().replacen("1 + q", "1 + q^2", 1);
    fs::write(&f2, tampered).unwrap();

    let o = qtsym(dir.path(), &["eval", "H[2,1]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), expected);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("quarantined"), "{err}");
    assert!(err.contains("checksum mismatch"), "{err}");
    assert!(dir.path().join("quarantine/macdonald_n03.json").exists());
    assert!(dir.path().join("quarantine/macdonald_n02.json").exists());
    assert_eq!(stats(dir.path())["result"]["quarantined"], 2);
}
