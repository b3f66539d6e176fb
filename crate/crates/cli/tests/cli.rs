use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_padic-transfer"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    if let Some(s) = stdin {
        child.stdin.take().unwrap().write_all(s.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().unwrap()
}

/// Runs `cmd` on `spec` read from stdin; returns exit code and parsed report.
fn job(cmd: &str, spec: Value, extra: &[&str]) -> (i32, Value) {
    let mut args = vec![cmd, "--json", "-"];
    args.extend_from_slice(extra);
    let out = run(&args, Some(&spec.to_string()));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), report)
}

#[test]
fn hilbert_example() {
    let (code, r) = job("hilbert", json!({"cmd": "hilbert", "a": "5", "b": "2", "p": 5}), &[]);
    assert_eq!(code, 0);
    assert_eq!(r["pass"], json!(true));
    assert_eq!(r["results"][0]["value"], json!(-1));
    assert_eq!(r["results"][0]["a"], json!({"val": 1, "unit": "1"}));
}

#[test]
fn nilp_verify_example() {
    let (code, r) = job("nilp-verify", json!({"cmd": "nilp-verify", "n_max": 5}), &[]);
    assert_eq!(code, 0);
    let rows = r["results"].as_array().unwrap();
    assert!(rows.len() > 100);
    assert!(rows.iter().all(|row| row["pass"] == json!(true)));
}

#[test]
fn fund_lemma_example() {
    let (code, r) = job("fund-lemma", json!({"cmd": "fund-lemma", "p": 3, "j_range": [0, 6]}), &[]);
    assert_eq!(code, 0);
    let rows = r["results"].as_array().unwrap();
    assert_eq!(rows.len(), 7 * 4);
    for row in rows {
        for key in ["a", "lhs", "rhs", "pass"] {
            assert!(row.get(key).is_some(), "{key} missing in {row}");
        }
        let j = row["a"]["val"].as_i64().unwrap();
        let lhs = &row["lhs"]["terms"];
        let expected = if j % 2 == 0 { json!([{"rational": "1", "zeta_pk": 0, "mu8": 0}]) } else { json!([]) };
        assert_eq!(lhs, &expected, "j = {j}");
    }
}

#[test]
fn output_is_reproducible_per_seed() {
    let spec = json!({"count": 6, "max_dim": 3});
    let a = run(&["weil-gamma", "--json", "-", "--seed", "11"], Some(&spec.to_string()));
    let b = run(&["weil-gamma", "--json", "-", "--seed", "11"], Some(&spec.to_string()));
    let c = run(&["weil-gamma", "--json", "-", "--seed", "12"], Some(&spec.to_string()));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    assert!(!String::from_utf8_lossy(&a.stdout).contains("timing_ms"));
}

#[test]
fn timing_is_opt_in() {
    let (_, r) = job("hilbert", json!({"a": 2, "b": 3}), &["--timing"]);
    assert!(r["meta"]["timing_ms"].is_number());
}

#[test]
fn usage_errors_name_the_field() {
    let (code, r) = job("classify", json!({"x": {"a1": "1", "a2": "not a number"}}), &[]);
    assert_eq!(code, 3);
    assert_eq!(r["meta"]["status"], json!("usage"));
    assert!(r["meta"]["error"].as_str().unwrap().contains("$.x.a2"));

    let (code, r) = job("orbital", json!({"x": {"a1": 1, "a2": 3}, "f": [{"scale": 0, "colour": 1}]}), &[]);
    assert_eq!(code, 3);
    assert!(r["meta"]["error"].as_str().unwrap().contains("$.f[0]"));

    let (code, r) = job("hilbert", json!({"cmd": "eta"}), &[]);
    assert_eq!(code, 3);
    assert!(r["meta"]["error"].as_str().unwrap().contains("$.cmd"));

    let (code, _) = job("hilbert", json!({"p": 9}), &[]);
    assert_eq!(code, 3);
}

#[test]
fn bad_arguments_exit_3() {
    assert_eq!(run(&["hilbert", "--bogus"], None).status.code(), Some(3));
    assert_eq!(run(&[], None).status.code(), Some(3));
    assert_eq!(run(&["--help"], None).status.code(), Some(0));
    let out = run(&["hilbert", "--json", "-"], Some("{"));
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn list_maps_every_command() {
    let out = run(&["--list"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let cmds = [
        "hilbert",
        "eta",
        "weil-gamma",
        "classify",
        "match",
        "kappa",
        "nilp-table",
        "nilp-verify",
        "orbital",
        "fund-lemma",
        "fourier-orbital",
        "limit-check",
        "gamma-pair",
    ];
    assert_eq!(text.lines().count(), cmds.len());
    for (line, cmd) in text.lines().zip(cmds) {
        let mut parts = line.split_whitespace();
        assert_eq!(parts.next(), Some(cmd));
        assert!(parts.next().unwrap().contains("::"));
    }
}

#[test]
fn failed_check_exits_1() {
    let (code, r) = job("match", json!({"x": {"a1": 1, "a2": 3}, "y": {"b": [1, 1]}, "expect": true}), &[]);
    assert_eq!(code, 1);
    assert_eq!(r["pass"], json!(false));
    assert_eq!(r["meta"]["status"], json!("fail"));
}

#[test]
fn incomplete_lattice_count_exits_2() {
    let (code, r) = job("fund-lemma", json!({"n": 2, "j_range": [0, 3], "depth": 2}), &[]);
    assert_eq!(code, 2);
    assert_eq!(r["meta"]["status"], json!("inconclusive"));
}

#[test]
fn unsupported_size_exits_2() {
    let x = json!({"a1": [[1, 0, 0], [0, 1, 0], [0, 0, 1]], "a2": [[1, 0, 0], [0, 2, 0], [0, 0, 4]]});
    let (code, r) = job("orbital", json!({ "x": x }), &[]);
    assert_eq!(code, 2);
    assert_eq!(r["meta"]["status"], json!("unsupported"));
}

#[test]
fn empty_results_pass_with_warning() {
    let (code, r) = job("nilp-table", json!({"partitions": []}), &[]);
    assert_eq!(code, 0);
    assert_eq!(r["results"], json!([]));
    assert!(!r["meta"]["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn report_has_the_documented_shape() {
    let (_, r) = job("fourier-orbital", json!({"x": {"a1": 1, "a2": 3}, "f": [{"coeff": "1/3", "mu8": 2, "scale": 1}]}), &[]);
    for key in ["meta", "inputs", "results", "pass"] {
        assert!(r.get(key).is_some(), "{key}");
    }
    for key in ["tool", "version", "schema", "command", "operation", "seed", "status", "warnings"] {
        assert!(r["meta"].get(key).is_some(), "{key}");
    }
    let row = &r["results"][0];
    // exact and floating renderings side by side
    let t = &row["transform"][0]["coeff"];
    assert_eq!(t["terms"][0]["mu8"], json!(2));
    assert_eq!(t["terms"][0]["rational"], json!("1/27"));
    assert!(t["complex"].is_array());
}

#[test]
fn gamma_pair_reports_the_eta_factor() {
    let (code, r) = job("gamma-pair", json!({"count": 12}), &["--seed", "3"]);
    let rows = r["results"].as_array().unwrap();
    assert!(rows.iter().all(|row| row["pairing_pass"] == json!(true) && row["disc_pass"] == json!(true)));
    assert!(rows.iter().all(|row| row["corrected_gamma_pass"] == json!(true)));
    for row in rows {
        assert_eq!(row["gamma_pass"] == json!(true), row["eta_correction"] == json!(1));
    }
    let plain_ok = rows.iter().all(|row| row["gamma_pass"] == json!(true));
    assert_eq!(code, if plain_ok { 0 } else { 1 });
}

#[test]
fn limit_check_explicit_pair() {
    let spec = json!({"precision": 24, "x": {"a1": 1, "a2": 3}, "y": {"a1": 2, "a2": 6}});
    let (code, r) = job("limit-check", spec, &[]);
    assert_eq!(code, 0, "{r}");
    assert!(r["meta"]["warnings"].as_array().unwrap().is_empty());
    assert_eq!(r["results"][0]["x"], json!({"a1": [[{"val": 0, "unit": "1"}]], "a2": [[{"val": 1, "unit": "1"}]]}));
}
