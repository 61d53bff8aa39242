use std::io::Write;
use std::process::{Command, Output};

fn zetareg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zetareg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn series_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn lambda_table_golden() {
    let o = zetareg(&[
        "lambda-table",
        "--from",
        "-4",
        "--to",
        "2",
        "--step",
        "0.5",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let want = "r,lambda\n-4,1\n-3.5,1.12732395447\n-3,1\n-2.5,0.787793409211\n-2,1\n\
                -1.5,1.63661977237\n-1,2\n-0.5,1.63661977237\n0,1\n0.5,0.787793409211\n1,1\n\
                1.5,1.12732395447\n2,1\n";
    assert_eq!(stdout(&o), want);
}

#[test]
fn lambda_table_is_bit_stable() {
    let args = [
        "lambda-table",
        "--from",
        "-10",
        "--to",
        "10",
        "--step",
        "0.001",
        "--format",
        "csv",
    ];
    let a = zetareg(&args);
    let b = zetareg(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 20_002);
}

#[test]
fn lambda_table_single_point_and_json() {
    let o = zetareg(&[
        "lambda-table",
        "--from",
        "-1.0",
        "--to",
        "-1.0",
        "--step",
        "0.1",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v, serde_json::json!([{"r": -1.0, "lambda": 2.0}]));
}

#[test]
fn lambda_table_grid_too_large() {
    let o = zetareg(&[
        "lambda-table",
        "--from",
        "0",
        "--to",
        "10",
        "--step",
        "0.000001",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[grid_too_large]"));
}

#[test]
fn eval_json_mu() {
    let o = zetareg(&["eval", "mu(3)", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["exact"], "1/20");
    assert_eq!(v["decimal"], "0.05");
    assert_eq!(v["mu"]["branch"], "integer");
    assert_eq!(v["mu"]["routes_agree"], true);
}

#[test]
fn eval_truncation_flag() {
    let o = zetareg(&["--truncation", "2", "eval", "mu(0.5)", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["mu"]["series_n"], 2);
    let series = v["mu"]["series_value"].as_f64().unwrap();
    assert!((series - 0.15720240222504214).abs() < 1e-14, "{series}");
}

#[test]
fn eval_csv() {
    let o = zetareg(&["--format", "csv", "eval", "zeta(-1)"]);
    let text = stdout(&o);
    assert!(text.starts_with("field,value\nquery,zeta(-1)\n"));
    assert!(text.contains("\nexact,-1/12\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(zetareg(&["eval", "mu(3)"]).status.code(), Some(0));
    assert_eq!(zetareg(&["eval", "zeta(1)"]).status.code(), Some(1));
    assert_eq!(zetareg(&["eval", "mu(-4)"]).status.code(), Some(1));
    assert_eq!(zetareg(&["eval", "mu(3,)"]).status.code(), Some(2));
    assert_eq!(zetareg(&["eval", "frob(3)"]).status.code(), Some(2));
    assert_eq!(
        zetareg(&["verify", "--suite", "exact"]).status.code(),
        Some(0)
    );
}

#[test]
fn parse_error_diagnostic() {
    let o = zetareg(&["eval", "mu(2.5.1)"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(
        err.contains("[trailing_input]")
            || err.contains("[unexpected_token]")
            || err.contains("[malformed_number]"),
        "{err}"
    );
    assert!(err.contains("at byte 6"), "{err}");
    assert!(err.ends_with("  mu(2.5.1)\n        ^\n"), "{err}");
    assert!(stdout(&o).is_empty());
}

#[test]
fn verify_report_formats() {
    let o = zetareg(&["verify", "--suite", "mu", "--format", "csv"]);
    let text = stdout(&o);
    assert!(text.starts_with("suite,check,passed,worst_residual,tolerance,points\n"));
    assert!(text.contains("\nmu,route_agreement,true,"));
    let o = zetareg(&["verify", "--suite", "special", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    let reflection = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "reflection_residual")
        .unwrap();
    assert!(reflection["worst_residual"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn regint_builtin_text() {
    let o = zetareg(&["regint", "--series", "exp", "--n", "20"]);
    let text = stdout(&o);
    assert!(text.contains("decimal: -0.367879441171\n"), "{text}");
    assert!(text.contains("tail_kind: alternating\n"), "{text}");
    assert!(text.contains("known_limit: -1/e\n"), "{text}");
}

#[test]
fn regint_series_file() {
    let f = series_file("# 1 + 3x^2\n0,1\n\n2,3\n");
    let path = f.path().to_str().unwrap();
    let o = zetareg(&[
        "regint",
        "--series-file",
        path,
        "--n",
        "5",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["exact"], "-3/4");
    assert_eq!(v["regint"]["tail_kind"], "declared");
    // also reachable by name from a query
    let o = zetareg(&["eval", "regint(file, 1)", "--series-file", path]);
    assert!(stdout(&o).contains("exact: -1/2\n"), "{}", stdout(&o));
}

#[test]
fn regint_bad_series_file() {
    let f = series_file("0,1\n3,1/0\n");
    let path = f.path().to_str().unwrap();
    let o = zetareg(&["regint", "--series-file", path, "--n", "5"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("line 2"), "{err}");
    assert!(err.contains("\n  3,1/0\n"), "{err}");
}

#[test]
fn regint_without_series() {
    let o = zetareg(&["regint", "--n", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_series_file() {
    let o = zetareg(&[
        "regint",
        "--series-file",
        "/nonexistent/zetareg-series",
        "--n",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[io]"));
}
