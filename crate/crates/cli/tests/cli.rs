use std::process::{Command, Output};

fn monofact(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monofact")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("one JSON object")
}

#[test]
fn decide_exit_codes_follow_the_verdict() {
    let o = monofact(&["decide", "--spec", "N<2,3>", "--property", "hfm"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("fails TwoLengths 6"));

    let o = monofact(&["decide", "--spec", "N<2,3>", "--property", "atomic"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "holds proved");
}

#[test]
fn unknown_maps_to_exit_two() {
    // a node budget of one cannot settle membership of a large element
    let o = monofact(&["--budget-nodes", "1", "contains", "--spec", "N<7,11,13>", "--elem", "1000001"]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    assert_eq!(stdout(&o).trim(), "unknown");
}

#[test]
fn factorize_json_record() {
    let o = monofact(&["--json", "factorize", "--spec", "N<3,4,5>", "--elem", "8", "--exact-len", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["command"], "factorize N<3,4,5> 8 len=2");
    assert_eq!(v["spec"], "N<3,4,5>");
    assert_eq!(v["result"]["factorizations"].as_array().unwrap().len(), 2);
    assert_eq!(v["flags"]["exhaustive"], true);
    assert_eq!(v["flags"]["status"], "ok");
    assert!(v["elapsed_ms"].is_null());
    assert_eq!(v["budget"]["max_nodes"], 2_000_000);
}

#[test]
fn timing_flag_fills_elapsed() {
    let o = monofact(&["--json", "--timing", "gp", "--spec", "Qge1"]);
    assert!(json(&o)["elapsed_ms"].is_u64());
}

#[test]
fn global_flags_after_the_subcommand() {
    let o = monofact(&["atoms", "--spec", "PrimeRecip", "--bound", "5", "--json", "--budget-denom", "5"]);
    let v = json(&o);
    assert_eq!(v["budget"]["max_denominator"], 5);
    assert_eq!(v["flags"]["exhaustive"], false);
}

#[test]
fn parse_errors_exit_65_with_position() {
    let o = monofact(&["atoms", "--spec", "N<2,,3>"]);
    assert_eq!(o.status.code(), Some(65));
    assert!(stderr(&o).contains("--spec: line 1, column 5"), "{}", stderr(&o));

    let o = monofact(&["parse", "Z^2<(1,2),(3)>"]);
    assert_eq!(o.status.code(), Some(65));
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(monofact(&[]).status.code(), Some(64));
    assert_eq!(monofact(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(monofact(&["decide", "--spec", "N<2,3>", "--property", "ufm"]).status.code(), Some(64));
    // an element outside the monoid is rejected, not a crash
    assert_eq!(monofact(&["divides", "--spec", "N<2,3>", "--a", "1", "--b", "3"]).status.code(), Some(64));
}

#[test]
fn help_exits_zero() {
    let o = monofact(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verify-paper"));
}

#[test]
fn dickson_points_inline_and_from_file() {
    let o = monofact(&["dickson", "min", "--points", "(1,2) (2,1) (2,2) (3,0)"]);
    assert_eq!(stdout(&o).trim(), "{(1,2), (2,1), (3,0)}");

    let dir = std::env::temp_dir().join(format!("monofact-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("points");
    std::fs::write(&path, "# a chain\n(0,0)\n(1,1)\n(2,2)\n(2,0)\n").unwrap();
    let o = monofact(&["dickson", "chain", "--points", path.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "[(0,0), (1,1), (2,2)]");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn construct_and_hilbert() {
    let o = monofact(&["construct", "union", "--ambient", "Qge0", "--sub", "Dyadic", "--b", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "closure=pass grothendieck=pass units=pass not_atomic=pass");

    let o = monofact(&["construct", "adjoin", "--base", "N<2,3>", "--b", "6", "--u", "-1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("warning"));

    let o = monofact(&["construct", "embed", "--p", "2", "--q", "3", "--elem", "(2,3)"]);
    assert_eq!(stdout(&o).trim(), "108");

    let o = monofact(&["hilbert", "classify", "441"]);
    assert_eq!(stdout(&o).trim(), "NotAtom");
}

#[test]
fn query_and_parse_commands() {
    let o = monofact(&["query", "lengths N<2,3> 6"]);
    assert_eq!(stdout(&o).trim(), "{2, 3}");
    let o = monofact(&["parse", "N<3,2,3>"]);
    assert_eq!(stdout(&o).trim(), "N<2,3>");
    let o = monofact(&["--json", "parse", "Q<6/4>"]);
    assert_eq!(json(&o)["result"]["canonical"], "Q<3/2>");
}

#[test]
fn json_output_is_deterministic() {
    let args = ["--json", "audit", "--spec", "Hilbert"];
    let a = monofact(&args);
    let b = monofact(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["result"]["consistent"], true);
}

#[test]
fn verify_paper_embedded_and_external() {
    let dir = std::env::temp_dir().join(format!("monofact-verify-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let report = dir.join("report.json");
    let o = monofact(&["verify-paper", "--report", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().last().unwrap().ends_with(" 0 failed"));
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["failed"], 0);
    assert!(r["results"].as_array().unwrap().iter().all(|x| x["pass"] == true));

    let fixtures = dir.join("fixtures");
    std::fs::write(&fixtures, "good: lengths N<2,3> 6  # expect: {2, 3}\nbad: lengths N<2,3> 6  # expect: {2}\n")
        .unwrap();
    let o = monofact(&["verify-paper", "--fixtures", fixtures.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL bad"));

    std::fs::write(&fixtures, "broken: lengths N<2,,3> 6  # expect: {2, 3}\n").unwrap();
    let o = monofact(&["verify-paper", "--fixtures", fixtures.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(65));
    assert!(stderr(&o).contains("line 1, column"), "{}", stderr(&o));
    std::fs::remove_dir_all(&dir).unwrap();
}
