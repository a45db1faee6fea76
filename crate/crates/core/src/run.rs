//! Runs a configuration and writes its artifacts.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde_json::json;

use crate::config::{RunConfig, Scenario};
use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::output::{write_trajectory_csv, Manifest, OutputDir, CONFIG_ECHO_FILE};
use crate::phase::{evaluate_suite, PhaseSuiteConfig};
use crate::scan::{compare_models, scan2d};
use crate::scenario::{run_ccars2, run_ccars4, run_fstirap, run_propagation, run_stirap3, run_stirap4, run_wigner};

/// Driver commands. `Run` accepts every scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Run,
    Scan,
    Compare,
    Propagate,
    Wigner,
    Phasefit,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Run => "run",
            Command::Scan => "scan",
            Command::Compare => "compare",
            Command::Propagate => "propagate",
            Command::Wigner => "wigner",
            Command::Phasefit => "phasefit",
        }
    }

    fn accepts(self, scenario: &Scenario) -> bool {
        matches!(
            (self, scenario),
            (Command::Run, _)
                | (Command::Scan | Command::Compare, Scenario::Scan(_))
                | (Command::Propagate, Scenario::Propagate(_))
                | (Command::Wigner, Scenario::Wigner(_))
                | (Command::Phasefit, Scenario::Phasefit(_))
        )
    }
}

fn final_summary<const N: usize>(traj: &Trajectory<N>) -> serde_json::Value {
    let last = traj.last();
    let abs: Vec<Vec<f64>> = (0..N).map(|i| (0..N).map(|j| last.get(i, j).norm()).collect()).collect();
    json!({
        "final_populations": last.populations().to_vec(),
        "final_abs_coherences": abs,
        "max_populations": (0..N).map(|k| traj.max_population(k)).collect::<Vec<_>>(),
        "final_abs_rho12": last.get(0, 1).norm(),
        "samples": traj.len(),
    })
}

fn trajectory<const N: usize>(out: &mut OutputDir, traj: &Trajectory<N>) -> Result<serde_json::Value> {
    let mut f = out.file("trajectory.csv")?;
    write_trajectory_csv(traj, &mut f)?;
    f.flush()?;
    Ok(final_summary(traj))
}

fn phasefit(out: &mut OutputDir, suite: &PhaseSuiteConfig) -> Result<serde_json::Value> {
    let report = evaluate_suite(suite)?;
    out.json("phasefit_report.json", &report)?;
    let mut w = csv::Writer::from_writer(out.file("phasefit_confusion.csv")?);
    w.write_record(["true_kind", "linear", "second", "roof"])?;
    for (name, row) in ["linear", "second", "roof"].iter().zip(report.confusion) {
        w.serialize((name, row[0], row[1], row[2]))?;
    }
    w.flush()?;
    Ok(json!({
        "accuracy": report.accuracy,
        "param_rms": report.param_rms,
        "failures": report.failures,
        "samples": report.confusion.iter().flatten().sum::<usize>(),
    }))
}

fn dispatch(cfg: &RunConfig, command: Command, out: &mut OutputDir) -> Result<serde_json::Value> {
    match &cfg.run {
        Scenario::Ccars2(c) => trajectory(out, &run_ccars2(c, c.grid.record_every)?),
        Scenario::Ccars4(c) => trajectory(out, &run_ccars4(c, c.grid.record_every)?),
        Scenario::Stirap3(c) => trajectory(out, &run_stirap3(c)?),
        Scenario::Stirap4(c) => trajectory(out, &run_stirap4(c)?),
        Scenario::Fstirap(c) => trajectory(out, &run_fstirap(c)?),
        Scenario::Propagate(c) => {
            let (initial, run) = run_propagation(c)?;
            initial.write_csv(out.file("fields_initial.csv")?)?;
            run.fields.write_csv(out.file("fields_final.csv")?)?;
            run.write_records_csv(out.file("layers.csv")?)?;
            for (index, snap) in &run.snapshots {
                snap.write_csv(out.file(&format!("fields_layer_{index:04}.csv"))?)?;
            }
            let peaks: Vec<f64> = run.records.iter().map(|r| r.anti_stokes_peak).collect();
            Ok(json!({
                "layers": run.records.len(),
                "first_antistokes_peak": peaks.first(),
                "final_antistokes_peak": peaks.last(),
                "buildup_ratio": run.buildup_ratio(),
                "monotone": peaks.windows(2).all(|w| w[1] >= w[0]),
            }))
        }
        Scenario::Wigner(c) => {
            let grid = run_wigner(c)?;
            grid.write_csv(out.file("wigner.csv")?)?;
            Ok(json!({
                "temporal_chirp": c.pulse()?.temporal_chirp(),
                "ridge_slope": grid.ridge_slope(),
            }))
        }
        Scenario::Phasefit(c) => {
            let suite = c.suite.clone().unwrap_or_else(PhaseSuiteConfig::pinned);
            phasefit(out, &suite)
        }
        Scenario::Scan(c) if command == Command::Compare => {
            let cmp = compare_models(c)?;
            cmp.write_csv(out.file("compare.csv")?)?;
            cmp.write_summary_csv(out.file("compare_summary.csv")?)?;
            Ok(json!({
                "cells": cmp.cells.len(),
                "max_diff_inside_band": cmp.max_diff(true),
                "max_diff_outside_band": cmp.max_diff(false),
            }))
        }
        Scenario::Scan(c) => {
            let grid = scan2d(c)?;
            grid.write_csv(out.file("scan.csv")?)?;
            Ok(json!({ "cells": grid.cells.len(), "failed_cells": grid.failed() }))
        }
    }
}

/// Runs `cfg` under `command`, writing CSVs, the normalized config and a
/// manifest into `out_dir`.
pub fn execute(cfg: &RunConfig, command: Command, out_dir: &Path) -> Result<Manifest> {
    if !command.accepts(&cfg.run) {
        return Err(Error::Config {
            path: "run.scenario".into(),
            message: format!("`{}` cannot run scenario `{}`", command.name(), cfg.run.name()),
        });
    }
    let start = Instant::now();
    let mut out = OutputDir::create(out_dir)?;
    out.json(CONFIG_ECHO_FILE, cfg)?;
    log::info!("running {} ({})", cfg.run.name(), command.name());
    let summary = dispatch(cfg, command, &mut out)?;
    let manifest = Manifest {
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        scenario: cfg.run.name().to_string(),
        command: command.name().to_string(),
        config: cfg.clone(),
        wall_time_s: start.elapsed().as_secs_f64(),
        outputs: out.written().to_vec(),
        summary,
    };
    out.write_manifest(&manifest)?;
    Ok(manifest)
}
