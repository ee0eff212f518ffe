use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use chaospend::fixnum::census::{run, CENSUS_HEADER};

fn chaospend() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_chaospend"));
    c.env_remove("CHAOSPEND_DEFAULT_LAYER");
    c
}

fn exec(args: &[&str]) -> Output {
    chaospend().args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn gen_file(dir: &Path, name: &str, extra: &[&str]) -> PathBuf {
    let out = dir.join(name);
    let mut args = vec!["gen", "--seed-hex", "0123456789ABCDEF", "-n", "5000", "-o", s(&out)];
    args.extend_from_slice(extra);
    let o = exec(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

#[test]
fn gen_writes_golden_prefix_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = gen_file(dir.path(), "run.txt", &[]);
    let text = std::fs::read_to_string(&out).unwrap();
    let first: Vec<&str> = text.lines().take(3).collect();
    assert_eq!(first, ["5827239755", "9697915262", "4191297173"]);
    assert_eq!(text.lines().count(), 5000);

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("run.txt.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], "0123456789ABCDEF");
    assert_eq!(manifest["layer"], "hw");
    assert_eq!(manifest["dt"], "+0.20");
    assert_eq!(manifest["n"], 5000);
}

#[test]
fn manifest_replay_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let first = gen_file(dir.path(), "a.csv", &["--format", "csv", "--warmup", "7", "--steps-per-output", "2"]);
    let second = dir.path().join("b.csv");
    let manifest = dir.path().join("a.csv.manifest.json");
    let o = exec(&["gen", "--manifest", s(&manifest), "-o", s(&second)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());
    assert!(std::fs::read_to_string(&second).unwrap().starts_with("index,value\n"));
}

#[test]
fn sharded_analysis_matches_single_pass() {
    let dir = tempfile::tempdir().unwrap();
    let input = gen_file(dir.path(), "run.txt", &[]);
    let (one, many) = (dir.path().join("one"), dir.path().join("many"));
    for (out, shards, threads) in [(&one, "1", "1"), (&many, "7", "3")] {
        let o = exec(&[
            "analyze",
            s(&input),
            "--out-dir",
            s(out),
            "--shards",
            shards,
            "--threads",
            threads,
            "--lag",
            "1",
            "--lag",
            "5",
            "--cycle",
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for suffix in [".histogram.csv", ".report.json", ".series.csv", ".cycle.json"] {
        let name = format!("run.txt{suffix}");
        assert_eq!(std::fs::read(one.join(&name)).unwrap(), std::fs::read(many.join(&name)).unwrap(), "{name}");
    }
    let cycle: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(one.join("run.txt.cycle.json")).unwrap()).unwrap();
    assert_eq!(cycle["found"], false);
    let hist = std::fs::read_to_string(one.join("run.txt.histogram.csv")).unwrap();
    assert_eq!(hist.lines().count(), 101);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "").unwrap();
    assert_eq!(exec(&["analyze", s(&empty)]).status.code(), Some(2));

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "0000000001\nnot-a-number\n").unwrap();
    let o = exec(&["analyze", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains(":2"));

    let input = gen_file(dir.path(), "run.txt", &[]);
    std::fs::remove_file(dir.path().join("run.txt.manifest.json")).unwrap();
    assert_eq!(exec(&["analyze", s(&input), "--cycle"]).status.code(), Some(2));

    assert_eq!(exec(&["gen", "--seed-hex", "01", "--os-entropy", "-n", "3"]).status.code(), Some(2));
    assert_eq!(exec(&["gen", "--seed-hex", "01", "-n", "3", "--dt", "0.90"]).status.code(), Some(2));
    assert_eq!(exec(&["gen", "-n", "3"]).status.code(), Some(2));
    assert_eq!(exec(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn reference_overflow_is_a_runtime_error() {
    let o = exec(&["gen", "--seed-hex", "0123456789ABCDEF", "-n", "10", "--layer", "ref"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("theta1"));
}

#[test]
fn layer_from_environment() {
    let o = chaospend()
        .env("CHAOSPEND_DEFAULT_LAYER", "ref")
        .args(["gen", "--seed-hex", "0123456789ABCDEF", "-n", "10"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let o = chaospend()
        .env("CHAOSPEND_DEFAULT_LAYER", "ref")
        .args(["gen", "--seed-hex", "0123456789ABCDEF", "-n", "3", "--layer", "hw"])
        .output()
        .unwrap();
    assert!(o.status.success());
    let o = chaospend()
        .env("CHAOSPEND_DEFAULT_LAYER", "fpga")
        .args(["gen", "--seed-hex", "01", "-n", "3"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn decode_subcommand() {
    let o = exec(&["decode", "--hmc", "12 34 00 00 00 00"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "x=4660 z=0 y=0");
    let o = exec(&["decode", "--hmc", "800000007fff", "--hmc-order", "xyz"]);
    assert_eq!(stdout(&o).trim(), "x=-32768 y=0 z=32767");
    assert_eq!(exec(&["decode", "--hmc", "1234"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let seed = dir.path().join("seed.bin");
    std::fs::write(&seed, [0xEF, 0xCD, 0xAB, 0x89, 0x67, 0x45, 0x23, 0x01]).unwrap();
    let o = exec(&["decode", "--seed-file", s(&seed)]);
    assert!(stdout(&o).contains("0123456789ABCDEF"));

    let log = dir.path().join("log.csv");
    std::fs::write(&log, format!("{}\n0,1,0,0,XADC,0,0,MCP3202_A,0,0,0\n", chaospend::sensorio::SENSOR_LOG_HEADER))
        .unwrap();
    let o = exec(&["decode", "--sensor-log", s(&log), "--pack"]);
    assert_eq!(stdout(&o).trim(), "0001000000000000");
    let o = exec(&["gen", "--sensor-log", s(&log), "-n", "2"]);
    assert!(o.status.success());
}

#[test]
fn trace_rows() {
    let o = exec(&["trace", "--seed-hex", "0123456789ABCDEF", "--steps", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], chaospend::pendulum::TRAJECTORY_HEADER);
    assert_eq!(lines.len(), 6);
}

#[test]
fn quick_selftest_passes() {
    let o = exec(&["selftest", "--quick"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn tampered_census_fails_selftest() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("census.csv");
    let census = run(chaospend::fixnum::census::DEFAULT_MAX_INT);
    let mut csv = Vec::new();
    census.write_csv(&mut csv).unwrap();
    let mut text = String::from_utf8(csv).unwrap();
    assert!(text.starts_with(CENSUS_HEADER));
    // Flip the last hex digit of the first data row's hardware result.
    let row_end = text[CENSUS_HEADER.len() + 1..].find('\n').unwrap() + CENSUS_HEADER.len() + 1;
    let last = text.as_bytes()[row_end - 10];
    let swapped = if last == b'0' { "1" } else { "0" };
    text.replace_range(row_end - 10..row_end - 9, swapped);
    std::fs::write(&path, text).unwrap();

    let o = exec(&["selftest", "--quick", "--census", s(&path)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}
