use std::process::Command;

fn ccic(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ccic")).args(args).env_remove("CCIC_BUDGET").output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn covers_from_file_and_bad_file() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("neq.bfn");
    std::fs::write(&good, "n=1\n01\n10\n").unwrap();
    let (code, out, _) = ccic(&["covers", "--file", good.to_str().unwrap(), "--z", "1"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["m"], 2);

    let bad = dir.path().join("bad.bfn");
    std::fs::write(&bad, "n=1\n12\n00\n").unwrap();
    let (code, out, err) = ccic(&["covers", "--file", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn verify_exit_codes() {
    let (code, out, _) = ccic(&["verify", "--theorem", "yes", "--fn", "NEQ", "--n", "2", "--tol", "3"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["gap"], 2);
    let (code, _, _) = ccic(&["verify", "--theorem", "yes", "--fn", "NEQ", "--n", "2", "--tol", "0"]);
    assert_eq!(code, 1);
    let (code, _, err) = ccic(&["verify", "--theorem", "yes", "--fn", "CONST0", "--n", "1"]);
    assert_eq!(code, 0);
    assert!(err.contains("empty side"));
    let (code, _, _) = ccic(&["verify", "--theorem", "sideways", "--fn", "NEQ", "--n", "1"]);
    assert_eq!(code, 2);
}

#[test]
fn run_writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let (code, out, _) = ccic(&[
        "run", "--protocol", "fig1", "--fn", "NEQ", "--n", "3", "--x", "101", "--y", "100", "--guess", "auto", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let t = json(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(t["verdict"], "1");
    assert_eq!(t["conversation_bits"], t["guess_bits"].as_u64().unwrap() + 1);
    assert_eq!(t["messages"][0]["from"], "alice");
}

#[test]
fn budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_ccic"))
        .args(["run", "--protocol", "fig1", "--fn", "CONST1", "--n", "1", "--x", "0", "--y", "0"])
        .env("CCIC_BUDGET", "1")
        .output()
        .unwrap();
    let t = json(&String::from_utf8(out.stdout).unwrap());
    // RECT programs need a full table read, which a budget of 1 forbids.
    assert_eq!(t["verdict"], "bot");
}

#[test]
fn sweep_is_reproducible_csv() {
    let (code, a, _) = ccic(&["sweep", "--n", "1", "--format", "csv"]);
    let (_, b, _) = ccic(&["sweep", "--n", "1", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 1 + 16 * 7);
    assert!(a.lines().skip(1).all(|l| l.ends_with(",true")));
}
