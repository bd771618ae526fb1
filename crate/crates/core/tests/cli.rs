use std::process::{Command, Output};

fn ellrook(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ellrook")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_passes_with_exit_zero() {
    let o = ellrook(&["check", "product-rook", "--board", "0,2,3,5,5", "--trials", "5", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("PASS product-rook board=0,2,3,5,5 family=elliptic trials=5"), "{out}");
    assert!(out.contains("precision=double-double"));
}

#[test]
fn check_is_reproducible_by_seed() {
    let args = ["check", "recursion-genstir2", "--I", "1", "--J", "2", "--trials", "4", "--seed", "7"];
    assert_eq!(stdout(&ellrook(&args)), stdout(&ellrook(&args)));
}

#[test]
fn json_report() {
    let o = ellrook(&["check", "telescoping", "--trials", "3", "--json", "--precision", "double"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["identity_name"], "telescoping");
    assert_eq!(v["trials"], 3);
    assert_eq!(v["precision"], "double");
    assert_eq!(v["passed"], true);
}

#[test]
fn unmet_tolerance_exits_one() {
    let o = ellrook(&["check", "product-file", "--board", "4,2,1,5,3", "--trials", "3", "--tol", "1e-40"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL"));
}

#[test]
fn bad_input_exits_two() {
    let o = ellrook(&["check", "no-such-identity"]);
    assert_eq!(o.status.code(), Some(2));
    let o = ellrook(&["check", "product-rook", "--board", "3,1"]);
    assert_eq!(o.status.code(), Some(2), "non-Ferrers board must be rejected");
    let o = ellrook(&["check", "telescoping", "--precision", "octuple"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn exact_check_over_trivial_weights() {
    let o = ellrook(&["check", "degeneration-carlitz", "--board", "n=5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("max_rel_err=0.000e0"));
}

#[test]
fn abel_table_csv() {
    let o = ellrook(&["table", "abel", "--nmax", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().next() == Some("family,n,k,value"));
    assert!(out.lines().any(|l| l == "abel,5,2,500"));
}

#[test]
fn table_json_to_file() {
    let dir = std::env::temp_dir().join(format!("ellrook-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("lah.json");
    let o = ellrook(&["table", "lah-r", "--r", "2", "--nmax", "4", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["weights"], "trivial");
    assert!(v["entries"].as_array().unwrap().iter().all(|e| e["n"].as_u64().unwrap() >= 2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn cycle_demo() {
    let o = ellrook(&["demo", "cycles", "--input", "n=8,r=3:(4,1),(5,2),(6,4),(7,4),(8,3)"]);
    assert_eq!(stdout(&o).trim(), "(6 7 4 1)(5 2)(8 3)");
}

#[test]
fn tube_demo() {
    let o = ellrook(&["demo", "tubes", "--input", "n=8,r=2:(9,6),(3,5),(6,3),(8,1)"]);
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("{(8,1),(3,2,4),(5),(7,6)}"));
}
