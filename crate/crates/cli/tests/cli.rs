//! End-to-end tests of the `frs` binary: real processes, real files, exact
//! exit codes and output bytes.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_frs");

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

const F5_CODE: &str = "p = 5\ngamma = 2\nn = 4\nm = 2\nk = 2\n";

#[test]
fn encode_matches_worked_example() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "code.cfg", F5_CODE);
    let msg = write(dir.path(), "msg.json", "[0, 1]");
    let out = run(&["encode", "--config", &cfg, &msg]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out), "[[1,2],[4,3]]\n");

    // --out writes the identical bytes to a file instead.
    let dest = dir.path().join("cw.json");
    let out = run(&["encode", "--config", &cfg, &msg, "--out", dest.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "");
    assert_eq!(fs::read_to_string(&dest).unwrap(), "[[1,2],[4,3]]\n");
}

#[test]
fn encode_zero_message_gives_zero_codeword() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "code.cfg", F5_CODE);
    let msg = write(dir.path(), "msg.json", "[0, 0]");
    let out = run(&["encode", "--config", &cfg, &msg]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "[[0,0],[0,0]]\n");
}

#[test]
fn encode_rejects_wrong_length_with_diagnostic() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "code.cfg", F5_CODE);
    let msg = write(dir.path(), "msg.json", "[0, 1, 2]");
    let out = run(&["encode", "--config", &cfg, &msg]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("k = 2"), "stderr: {}", stderr(&out));
}

#[test]
fn decode_round_trips_a_clean_codeword() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "code.cfg",
        "p = 13\nn = 12\nm = 4\nk = 3\ns = 2\nvariant = affine\n",
    );
    let msg = write(dir.path(), "msg.json", "[7, 2, 11]");
    let cw = dir.path().join("cw.json");
    let out = run(&["encode", "--config", &cfg, &msg, "--out", cw.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));

    let out = run(&["decode", "--config", &cfg, cw.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let candidates = v["candidates"].as_array().unwrap();
    assert!(candidates.iter().any(|c| c == &serde_json::json!([7, 2, 11])));
    assert!(v["dimension"].as_u64().unwrap() <= 1);
    assert_eq!(v["empty"], serde_json::json!(false));
    assert!(v["t_min"].as_u64().unwrap() >= 1);
    assert!(v["timings"]["solve_secs"].as_f64().is_some());

    // --no-timings drops the timing block entirely.
    let out = run(&["decode", "--config", &cfg, cw.to_str().unwrap(), "--no-timings"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v.get("timings").is_none());
}

#[test]
fn decode_cap_exhaustion_exits_2() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "code.cfg",
        "p = 13\nn = 12\nm = 4\nk = 3\ns = 2\n",
    );
    let msg = write(dir.path(), "msg.json", "[1, 0, 0]");
    let cw = dir.path().join("cw.json");
    let out = run(&["encode", "--config", &cfg, &msg, "--out", cw.to_str().unwrap()]);
    assert!(out.status.success());
    let out = run(&["decode", "--config", &cfg, cw.to_str().unwrap(), "--cap", "0"]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr(&out));
}

#[test]
fn simulate_is_byte_deterministic_without_timings() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "sim.cfg",
        "p = 13\nn = 12\nm = 2\nk = 3\ns = 2\nerrors = 1\nchannel = random\nseed = 9\ntrials = 6\n",
    );
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let out = run(&["simulate", "--config", &cfg, "--no-timings", "--out", a.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let out = run(&["simulate", "--config", &cfg, "--no-timings", "--out", b.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    // One corrupted column is within the guaranteed radius here, so every
    // trial recovers the message.
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&a).unwrap()).unwrap();
    assert_eq!(v["aggregate"]["success_rate"], serde_json::json!(1.0));
    assert_eq!(v["trials"], serde_json::json!(6));
    assert_eq!(v["per_trial"].as_array().unwrap().len(), 6);
    for t in v["per_trial"].as_array().unwrap() {
        assert_eq!(t["errors"], serde_json::json!(1));
        assert_eq!(t["success"], serde_json::json!(true));
        assert!(t.get("timings").is_none());
    }
}

#[test]
fn simulate_burst_and_flag_overrides() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "sim.cfg",
        "p = 17\nn = 16\nm = 1\nk = 4\ns = 1\nerrors = 6\nchannel = burst\nseed = 1\ntrials = 2\n",
    );
    // Flags override config: force 3 trials and a different seed.
    let out = run(&["simulate", "--config", &cfg, "--trials", "3", "--seed", "4", "--no-timings"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["trials"], serde_json::json!(3));
    assert_eq!(v["seed"], serde_json::json!(4));
    assert_eq!(v["channel"], serde_json::json!("burst"));
    // t_min = 10 here, so a burst of 6 sits exactly at the radius N - t_min
    // and every trial must still recover the message.
    assert_eq!(v["aggregate"]["success_rate"], serde_json::json!(1.0));
}

#[test]
fn radius_table_has_frozen_row() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "table.cfg",
        "s_min = 2\ns_max = 2\nm_min = 4\nm_max = 4\nrates = 0.25\nn = 16\n",
    );
    let out = run(&["radius-table", "--config", &cfg]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "s,m,R,frac_multiplicity,frac_degree1,frac_linear,amgm_ok,t_min,e_max,status"
    );
    assert_eq!(
        lines.next().unwrap(),
        "2,4,0.25,0.480750,0.555556,0.833333,true,3,1,ok"
    );
    assert_eq!(lines.next(), None);
}

#[test]
fn radius_table_marks_degenerate_rows() {
    let dir = TempDir::new().unwrap();
    // s = m = 2 on n = 12 gives only 6 conditions; k = 5 needs k + s + 1 = 8
    // of them, so the degree bound is infeasible and the row is marked.
    let cfg = write(
        dir.path(),
        "table.cfg",
        "s_min = 2\ns_max = 2\nm_min = 2\nm_max = 2\nrates = 0.41666667\nn = 12\n",
    );
    let out = run(&["radius-table", "--config", &cfg]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    assert!(row.ends_with(",,degenerate"), "row: {row}");
}

#[test]
fn recover_returns_the_planted_message() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "code.cfg",
        "p = 17\nn = 16\nm = 4\nk = 3\ns = 2\nt = 4\n",
    );
    let msg = write(dir.path(), "msg.json", "[1, 1, 0]");
    let cw = dir.path().join("cw.json");
    let out = run(&["encode", "--config", &cfg, &msg, "--out", cw.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let columns: Vec<Vec<u64>> =
        serde_json::from_str(&fs::read_to_string(&cw).unwrap()).unwrap();
    let sets: Vec<Vec<Vec<u64>>> = columns.into_iter().map(|c| vec![c]).collect();
    let sets_path = write(dir.path(), "sets.json", &serde_json::to_string(&sets).unwrap());

    let out = run(&["recover", "--config", &cfg, &sets_path, "--no-timings"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["candidates"], serde_json::json!([[1, 1, 0]]));
    assert_eq!(v["t"], serde_json::json!(4));
    assert!(v["threshold"].as_u64().unwrap() <= 4);
    assert!(v.get("timings").is_none());
}

#[test]
fn evasive_audit_reports_per_seed_results() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "audit.cfg",
        "p = 2\ne = 2\nk = 3\nr = 2\nt_p = 6\ns = 2\nseeds = 5\nsubspaces = 8\nseed = 7\n",
    );
    let out = run(&["evasive-audit", "--config", &cfg]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["q"], serde_json::json!(4));
    assert_eq!(v["aggregate"]["band"], serde_json::json!([8, 32]));
    let audits = v["audits"].as_array().unwrap();
    assert_eq!(audits.len(), 5);
    for a in audits {
        // 4^3 = 64 points, well under the cap: sizes are exact censuses.
        assert_eq!(a["size_exact"], serde_json::json!(true));
        assert!(a["set_size"].as_u64().unwrap() <= 64);
        assert_eq!(a["trials"], serde_json::json!(8));
    }
    // Determinism across invocations.
    let again = run(&["evasive-audit", "--config", &cfg]);
    assert_eq!(stdout(&out), stdout(&again));
}

#[test]
fn config_errors_exit_1() {
    let dir = TempDir::new().unwrap();

    let cfg = write(dir.path(), "bad.cfg", "p = 5\nbogus = 1\n");
    let msg = write(dir.path(), "msg.json", "[0, 1]");
    let out = run(&["encode", "--config", &cfg, &msg]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("bogus"), "stderr: {}", stderr(&out));

    let cfg = write(dir.path(), "dup.cfg", "p = 5\np = 7\n");
    let out = run(&["encode", "--config", &cfg, &msg]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("duplicate"));

    // Missing --config entirely.
    let out = run(&["encode", &msg]);
    assert_eq!(out.status.code(), Some(1));

    // Bad variant value.
    let cw = write(dir.path(), "cw.json", "[[1,2],[4,3]]");
    let mut with_s = String::from(F5_CODE);
    with_s.push_str("s = 1\n");
    let cfg2 = write(dir.path(), "code2.cfg", &with_s);
    let out = run(&["decode", "--config", &cfg2, &cw, "--variant", "cubic"]);
    assert_eq!(out.status.code(), Some(1));

    // Unparsable field order.
    let cfg3 = write(dir.path(), "bad2.cfg", "p = five\nn = 4\nm = 2\nk = 2\n");
    let out = run(&["encode", "--config", &cfg3, &msg]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_0() {
    let out = run(&["--help"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("radius-table"));
}
