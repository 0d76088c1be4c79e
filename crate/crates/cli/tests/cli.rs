//! End-to-end checks of the binary: output shapes and the exit-code
//! contract (0 success, 2 config error, 3 solver error).

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const POWER_CFG: &str = "\
family = gl1
alpha = 1e-4
beta = 1.1
G = 70000
c = 3500
L = 100000
d = 1
";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_secinvest"))
}

fn write_cfg(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn defender_policy_single_point_record() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "power.cfg", POWER_CFG);
    let out = bin()
        .args(["defender-policy", "--scenario"])
        .arg(&cfg)
        .args(["--v", "0.95"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("interval  DI3"), "{text}");
    assert!(text.contains("decision  some"), "{text}");
    assert!(text.contains("s_star    0.92754666"), "{text}");
}

#[test]
fn defender_policy_sweep_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "power.cfg", POWER_CFG);
    let out = bin()
        .args(["defender-policy", "--scenario"])
        .arg(&cfg)
        .args(["--v-sweep", "0.1:0.9:5"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0], "v,interval,decision,s_star,z_star,cost,s1,s2,error");
}

#[test]
fn attacker_curve_reference_shape() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        dir.path(),
        "fig.cfg",
        "family = gl1\nalpha = 1\nbeta = 1\nG = 10\nc = 1\nL = 10\nd = 1\n",
    );
    let out_path = dir.path().join("curve.csv");
    let out = bin()
        .args(["attacker-curve", "--model"])
        .arg(&cfg)
        .args(["--v", "0.75", "--samples", "80", "--out"])
        .arg(&out_path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&out_path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "s,z,y_star,T_star,net_gain");
    assert_eq!(lines.len(), 81);
    let effort: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    let peak = effort.iter().cloned().fold(f64::MIN, f64::max);
    assert!((peak - 10.0 / std::f64::consts::E).abs() < 2e-3, "peak {peak}");
}

#[test]
fn fixed_points_json_roots() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "power.cfg", POWER_CFG);
    let out = bin()
        .args(["fixed-points", "--scenario"])
        .arg(&cfg)
        .arg("--json")
        .output()
        .unwrap();
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let roots = value["roots"].as_array().unwrap();
    assert_eq!(roots.len(), 2);
    assert!((roots[0].as_f64().unwrap() - 0.58673419).abs() < 1e-6);
    assert_eq!(value["partition"].as_array().unwrap().len(), 4);
    assert_eq!(value["partition"][0]["interval"], "DI1");
}

#[test]
fn compare_gl_csv_columns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "power.cfg", POWER_CFG);
    let out_path = dir.path().join("cmp.csv");
    let out = bin()
        .args(["compare-gl", "--scenario"])
        .arg(&cfg)
        .args(["--v-sweep", "0.3:0.9:4", "--out"])
        .arg(&out_path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.starts_with(
        "v,decision,s_star,z_star,cost,s_gl,z_gl,gl_cost,investment_gap,bound_ratio\n"
    ));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn sweep_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_cfg(
        dir.path(),
        "sweep.cfg",
        &format!("{POWER_CFG}variable = v\nrange = 0.2:0.95:16\n"),
    );
    let out_dir = dir.path().join("out");
    let run = || {
        let out = bin()
            .args(["sweep", "--spec"])
            .arg(&spec)
            .arg("--out-dir")
            .arg(&out_dir)
            .output()
            .unwrap();
        assert!(out.status.success());
        std::fs::read(out_dir.join("sweep.csv")).unwrap()
    };
    let first = run();
    let svg = std::fs::read_to_string(out_dir.join("sweep.svg")).unwrap();
    assert!(svg.starts_with("<svg "));
    let second = run();
    assert_eq!(first, second, "sweep output must be reproducible");
}

#[test]
fn exit_codes_separate_config_from_solver_errors() {
    let dir = tempfile::tempdir().unwrap();

    let out = bin()
        .args(["defender-policy", "--scenario"])
        .arg(dir.path().join("missing.cfg"))
        .args(["--v", "0.5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "missing file is a config error");

    let bad = write_cfg(dir.path(), "bad.cfg", "family = gl1\nalpha = nope\n");
    let out = bin()
        .args(["fixed-points", "--scenario"])
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "malformed value is a config error");

    let cfg = write_cfg(dir.path(), "power.cfg", POWER_CFG);
    let out = bin()
        .args(["defender-policy", "--scenario"])
        .arg(&cfg)
        .args(["--v", "1.5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "out-of-domain v is a solver error");
}
