//! End-to-end checks of the command-line interface and its file formats.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tigris"))
}

fn tmp_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tigris-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn plan_bench_render_round_trip() {
    let dir = tmp_dir("roundtrip");

    // plan a generated scenario with a small iteration budget
    let out = bin()
        .args(["plan", "--seed", "9", "--iterations", "60", "--planner", "tigris"])
        .args(["--out", dir.join("plan").to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let scenario_path = dir.join("plan/scenario.toml");
    let result_path = dir.join("plan/result.toml");
    assert!(scenario_path.exists() && result_path.exists());

    // same seed again: byte-identical outputs
    let again = tmp_dir("roundtrip-again");
    let out = bin()
        .args(["plan", "--seed", "9", "--iterations", "60", "--planner", "tigris"])
        .args(["--out", again.join("plan").to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(
        std::fs::read(&result_path).unwrap(),
        std::fs::read(again.join("plan/result.toml")).unwrap()
    );

    // render the stored result
    let out = bin()
        .args(["render"])
        .args(["--scenario", scenario_path.to_str().unwrap()])
        .args(["--result", result_path.to_str().unwrap()])
        .args(["--out", dir.join("render").to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["heatmap.pgm", "path.csv", "combined.ppm"] {
        assert!(dir.join("render").join(f).exists(), "missing {f}");
    }
    let pgm = std::fs::read_to_string(dir.join("render/heatmap.pgm")).unwrap();
    assert!(pgm.starts_with("P2\n50 50\n255\n"));

    // a small paired benchmark writes records and a report
    let out = bin()
        .args(["bench", "--trials", "4", "--jobs", "2", "--seed", "5"])
        .args(["--iterations", "40"])
        .args(["--out", dir.join("bench").to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = std::fs::read_to_string(dir.join("bench/report.toml")).unwrap();
    assert!(report.contains("label = \"all\""));
    assert!(dir.join("bench/trials.toml").exists());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("group"));

    std::fs::remove_dir_all(&dir).ok();
    std::fs::remove_dir_all(&again).ok();
}

#[test]
fn bad_inputs_exit_with_code_1() {
    let dir = tmp_dir("bad");
    let bad = dir.join("bad.toml");
    std::fs::write(&bad, "this is not a scenario").unwrap();
    let out = bin()
        .args(["plan", "--scenario", bad.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());

    // unknown planner name is a usage error from the parser (exit 2 by clap)
    let out = bin().args(["plan", "--planner", "dijkstra"]).output().unwrap();
    assert!(!out.status.success());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn missing_file_exits_with_code_2() {
    let out = bin()
        .args(["plan", "--scenario", "/definitely/not/here.toml"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
