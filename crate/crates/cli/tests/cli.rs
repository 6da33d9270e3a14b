//! End-to-end checks of the binary: golden JSON lines, exit codes, and the
//! quick selftest.

use std::process::{Command, Output};

fn wittkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wittkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).trim().to_string()
}

#[test]
fn kgroup_json_golden() {
    let out = wittkit(&["kgroup", "--p", "2", "--m", "4", "--j", "1", "--json"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        r#"{"ambient":[{"component":1,"modulus":8},{"component":3,"modulus":2}],"degree":1,"invariant_factors":[4,2],"j":1,"m":4,"oracle_checked":true,"order":"8","p":2}"#
    );
}

#[test]
fn kgroup_rejects_composite_prime_with_exit_2() {
    let out = wittkit(&["kgroup", "--p", "4", "--m", "2", "--j", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("4 is not prime"), "stderr: {err}");
}

#[test]
fn nerve_json_golden() {
    let out = wittkit(&["nerve", "--k", "2", "--i", "2", "--json"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        r#"{"cells":[0,1,1],"euler":0,"homology":[{"degree":1,"factors":[2]}],"i":2,"k":2,"matches_prediction":true}"#
    );
}

#[test]
fn malformed_set_is_a_usage_error() {
    let out = wittkit(&["witt", "--set", "2..5", "--op", "ghost", "--a", "1"]);
    assert_eq!(out.status.code(), Some(1));

    let out = wittkit(&["witt", "--set", "{2,4}", "--op", "ghost", "--a", "1,2"]);
    assert_eq!(out.status.code(), Some(2), "divisor-closure failure is a domain error");

    let out = wittkit(&["witt", "--set", "1..2", "--op", "add", "--a", "1,0"]);
    assert_eq!(out.status.code(), Some(1), "missing --b is a usage error");
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = wittkit(&["kgroup", "--p", "2", "--m", "2", "--j", "1", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn tower_guard_exits_3() {
    let out = wittkit(&["tower", "--kind", "fermat", "--p", "2", "--j", "1", "--stages", "9"]);
    assert_eq!(out.status.code(), Some(3));
    // raising the bound unblocks the next stage
    let out = wittkit(&[
        "tower",
        "--kind",
        "fermat",
        "--p",
        "2",
        "--j",
        "1",
        "--stages",
        "7",
        "--max-order-bits",
        "128",
        "--json",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains(r#""stage":7"#));
}

#[test]
fn witt_add_roundtrip() {
    let out = wittkit(&[
        "witt", "--set", "1..2", "--op", "add", "--a", "1,0", "--b", "1,0", "--json",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), r#"{"coeffs":[2,-1],"modulus":0,"set":[1,2]}"#);
}

#[test]
fn oracle_json() {
    let out = wittkit(&["oracle", "--p", "3", "--m", "2", "--json"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), r#"{"invariant_factors":[3],"m":2,"p":3}"#);
}

#[test]
fn vmap_reports_injectivity() {
    let out = wittkit(&["vmap", "--p", "2", "--m", "2", "--n", "2", "--j", "1", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = stdout(&out).parse().unwrap();
    assert_eq!(v["injective"], true);
    assert_eq!(v["image_order"], "2");
}

#[test]
fn selftest_quick_passes() {
    let out = wittkit(&["selftest", "--quick"]);
    assert!(
        out.status.success(),
        "quick selftest failed:\n{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let text = stdout(&out);
    assert!(text.contains("all 9 checks passed"), "{text}");
}
