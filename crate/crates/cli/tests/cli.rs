use std::process::{Command, Output};

fn oddsbox(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oddsbox"))
        .args(args)
        .env_remove("UNIFORMITY_MAX_Q")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn field_info_reports_characters() {
    let o = oddsbox(&["field-info", "7", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["q"], 7);
    assert_eq!(v["q_mod_3"], 1);
    assert_eq!(v["q_mod_4"], 3);
}

#[test]
fn non_prime_is_a_usage_error() {
    let o = oddsbox(&["field-info", "4", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("error"));
}

#[test]
fn inverse_cddt_over_f17() {
    let o = oddsbox(&["table", "cddt", "--p", "17", "--fn", "inverse", "--c", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).starts_with("kind=cddt c=4 q=17 max=3 "),
        "{}",
        stdout(&o)
    );
}

#[test]
fn inverse_bct_over_f27() {
    let o = oddsbox(&[
        "table", "bct", "--p", "3", "--n", "3", "--fn", "inverse", "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let summary = stderr(&o);
    assert!(summary.contains("q=27 max=3"), "{summary}");
    assert!(stdout(&o).lines().count() > 27 * 27);
}

#[test]
fn verify_passes_and_fails_with_exit_codes() {
    let o = oddsbox(&["verify", "INV_M1_SPECTRUM", "--fields", "5:1,7:1,3:2"]);
    assert_eq!(o.status.code(), Some(0));
    for line in stdout(&o).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["status"], "PASS");
    }
    // X^3 over F_5 has boomerang uniformity 2, not 3
    let o = oddsbox(&[
        "verify",
        "APN_CATALOG",
        "--fields",
        "5:1",
        "--format",
        "text",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("APN_CATALOG F_5 f1 FAIL"));
}

#[test]
fn unknown_theorem_is_a_usage_error() {
    assert_eq!(
        oddsbox(&["verify", "NOPE", "--fields", "5:1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn size_cap_exit_code() {
    let o = oddsbox(&[
        "table", "bct", "--p", "3", "--n", "3", "--fn", "inverse", "--max-q", "10",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_oddsbox"))
        .args(["table", "ddt", "--p", "13", "--fn", "x^3"])
        .env("UNIFORMITY_MAX_Q", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn bad_lut_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("short.lut");
    std::fs::write(&path, "7 1\n0 1\n0\n1\n2\n").unwrap();
    let o = oddsbox(&["table", "ddt", "--lut", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}

#[test]
fn lut_file_round_trip() {
    let lut = oddsbox(&["fn-eval", "--p", "7", "--n", "2", "--fn", "f4"]);
    assert_eq!(lut.status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f4.lut");
    std::fs::write(&path, &lut.stdout).unwrap();
    let by_name = oddsbox(&["table", "bct", "--p", "7", "--n", "2", "--fn", "f4"]);
    let by_file = oddsbox(&["table", "bct", "--lut", path.to_str().unwrap()]);
    assert_eq!(by_name.status.code(), Some(0));
    // the summary line differs: a LUT carries no power-map spectrum
    let rows = |o: &Output| {
        stdout(o)
            .lines()
            .skip(1)
            .map(String::from)
            .collect::<Vec<_>>()
    };
    assert_eq!(rows(&by_name), rows(&by_file));
    assert!(stdout(&by_file).starts_with("kind=bct q=49 max=3 "));
}

#[test]
fn output_does_not_depend_on_workers() {
    let args = ["verify", "all", "--fields", "7:1,3:2,5:2"];
    let one = oddsbox(&[&["--workers", "1"][..], &args].concat());
    let four = oddsbox(&[&["--workers", "4"][..], &args].concat());
    assert_eq!(one.status.code(), four.status.code());
    assert_eq!(one.stdout, four.stdout);
    let t = [
        "table", "cddt", "--p", "3", "--n", "3", "--fn", "inverse", "--c", "2", "--format", "json",
    ];
    assert_eq!(
        oddsbox(&[&["--workers", "1"][..], &t].concat()).stdout,
        oddsbox(&[&["--workers", "4"][..], &t].concat()).stdout
    );
}

#[test]
fn switch_search_s0_rows() {
    let o = oddsbox(&["search-switches", "5", "3", "--s", "0", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ds: Vec<u64> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["d"].as_u64().unwrap())
        .collect();
    assert_eq!(ds, [0, 99, 119, 123]);
}

#[test]
fn spectrum_of_inverse() {
    let o = oddsbox(&[
        "spectrum", "cdiff", "--p", "7", "--fn", "inverse", "--c", "-1", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.is_object());
}
