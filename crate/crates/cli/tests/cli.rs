use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn sim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sim"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("sim binary runs")
}

fn config(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name).display().to_string()
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("config_in.json");
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn last_row(path: PathBuf) -> Vec<f64> {
    let text = std::fs::read_to_string(path).unwrap();
    text.lines().last().unwrap().split(',').map(|v| v.parse().unwrap()).collect()
}

#[test]
fn resonant_run_ends_at_half_coherence() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = sim(&["run", &config("ccars2_resonant.json"), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(out.join("trajectory.csv")).unwrap();
    assert!(text.starts_with("t,rho11,rho22,rho33,rho44,re_rho12,im_rho12,abs_rho12\n"));
    let row = last_row(out.join("trajectory.csv"));
    assert!((row[7] - 0.5).abs() < 0.02, "final coherence {}", row[7]);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["scenario"], "ccars2");
    assert!(manifest["wall_time_s"].as_f64().unwrap() >= 0.0);
    let outputs: Vec<&str> = manifest["outputs"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert_eq!(outputs, ["config.json", "trajectory.csv"]);
}

#[test]
fn rerun_from_echoed_config_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert!(sim(&["run", &config("ccars2_si.json"), "--out", a.to_str().unwrap()]).status.success());
    let echoed = a.join("config.json");
    assert!(sim(&["run", echoed.to_str().unwrap(), "--out", b.to_str().unwrap()]).status.success());
    assert_eq!(
        std::fs::read(a.join("trajectory.csv")).unwrap(),
        std::fs::read(b.join("trajectory.csv")).unwrap()
    );
}

#[test]
fn si_flag_matches_natural_units() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"version": 1, "run": {"scenario": "ccars2", "omega3_0": 425.25, "delta": 85.05,
            "tau0": 117.58, "chirp_ratio": -7.5}}"#,
    );
    let si = dir.path().join("si");
    let o = sim(&["run", &cfg, "--si", "--out", si.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let row = last_row(si.join("trajectory.csv"));
    assert!((row[7] - 0.5).abs() < 0.02);
}

#[test]
fn chirped_stirap_selects_lower_state() {
    let dir = tempfile::tempdir().unwrap();
    let o = sim(&["run", &config("stirap4_negative_chirp.json"), "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let row = last_row(dir.path().join("trajectory.csv"));
    assert!(row[3] > 0.9 && row[4] < 0.1, "rho33 {} rho44 {}", row[3], row[4]);
}

#[test]
fn unknown_key_exits_2_with_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"version": 1, "run": {"scenario": "stirap3", "omega0": 3.0, "width": 100.0, "separation": 70.0,
            "grid": {"span": 3.0, "steps_per_width": 100, "record_every": 1, "bogus": 2}}}"#,
    );
    let o = sim(&["run", &cfg, "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("run") && err.contains("bogus"), "{err}");

    let cfg = write_config(dir.path(), r#"{"version": 1, "extra": true, "run": {"scenario": "phasefit"}}"#);
    let o = sim(&["phasefit", &cfg, "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("extra"));
}

#[test]
fn out_of_range_value_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"version": 1, "run": {"scenario": "fstirap", "omega0": 3.0, "mixing_angle": 2.0, "t_p": 35.0, "tau": 100.0}}"#,
    );
    let o = sim(&["run", &cfg, "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("run.mixing_angle"));
}

#[test]
fn wrong_command_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = sim(&["wigner", &config("ccars2_resonant.json"), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_file_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.json");
    let o = sim(&["run", missing.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn unstable_step_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"version": 1, "run": {"scenario": "ccars4", "omega3_0": 5.0, "delta": 1.0, "tau0": 10.0,
            "chirp_ratio": -7.5, "grid": {"span": 5.0, "steps_per_width": 1, "record_every": 1}}}"#,
    );
    let o = sim(&["run", &cfg, "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn degenerate_scan_writes_four_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"version": 1, "run": {"scenario": "scan", "model": "two_level",
            "ccars": {"omega3_0": 1.0, "delta": 1.0, "tau0": 5.0, "chirp_ratio": -3.0},
            "axis1": {"name": "omega3_0", "min": 1.0, "max": 2.0, "count": 2},
            "axis2": {"name": "two_photon", "min": 0.0, "max": 0.1, "count": 2},
            "observable": "final_rho22"}}"#,
    );
    let out = dir.path().join("o");
    let o = sim(&["scan", &cfg, "--out", out.to_str().unwrap(), "--threads", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(out.join("scan.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "omega3_0,two_photon,final_rho22");
    let echo: Vec<(String, String)> = lines[1..]
        .iter()
        .map(|l| {
            let v: Vec<&str> = l.split(',').collect();
            (v[0].to_string(), v[1].to_string())
        })
        .collect();
    let expect = [("1.0", "0.0"), ("1.0", "0.1"), ("2.0", "0.0"), ("2.0", "0.1")];
    assert_eq!(echo.len(), 4);
    for ((x, y), (ex, ey)) in echo.iter().zip(expect) {
        assert_eq!((x.as_str(), y.as_str()), (ex, ey));
    }
}

#[test]
fn compare_writes_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"version": 1, "run": {"scenario": "scan", "model": "two_level",
            "ccars": {"omega3_0": 2.0, "delta": 1.0, "tau0": 5.0, "chirp_ratio": -3.0},
            "axis1": {"name": "omega3_0", "min": 2.0, "max": 3.0, "count": 2},
            "axis2": {"name": "chirp_ratio", "min": -4.0, "max": 0.5, "count": 2},
            "observable": "final_coherence"}}"#,
    );
    let out = dir.path().join("o");
    let o = sim(&["compare", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = std::fs::read_to_string(out.join("compare_summary.csv")).unwrap();
    let lines: Vec<&str> = summary.lines().collect();
    assert_eq!(lines[0], "region,cells,max_abs_diff");
    assert!(lines[1].starts_with("inside_band,2,"));
    assert!(lines[2].starts_with("outside_band,2,"));
}

#[test]
fn short_propagation_writes_layers() {
    let dir = tempfile::tempdir().unwrap();
    let o = sim(&["propagate", &config("propagate_short.json"), "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("layers.csv")).unwrap();
    assert!(text.starts_with("index,z,eta,anti_stokes_peak,final_abs_rho12\n"));
    assert_eq!(text.lines().count(), 6);
    for f in ["fields_initial.csv", "fields_final.csv", "manifest.json"] {
        assert!(dir.path().join(f).exists());
    }
}
