//! Two-parameter scans and model comparison maps.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{AxisName, CcarsConfig, Observable, PropagateConfig, ScanConfig, ScanModel, ScanSpec};
use crate::error::{Error, Result};
use crate::scenario::{run_ccars2, run_ccars4, run_propagation};

/// Chirp ratios with magnitude below this are inside the near-zero band of a
/// model comparison.
pub const CHIRP_BAND: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanCell {
    pub x: f64,
    pub y: f64,
    pub value: f64,
}

/// Cells ordered with `axis1` as the outer index.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanGrid {
    pub spec: ScanSpec,
    pub cells: Vec<ScanCell>,
}

impl ScanGrid {
    pub fn failed(&self) -> usize {
        self.cells.iter().filter(|c| c.value.is_nan()).count()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            self.spec.axis1.name.as_str(),
            self.spec.axis2.name.as_str(),
            observable_name(self.spec.observable),
        ])?;
        for c in &self.cells {
            w.serialize((c.x, c.y, c.value))?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn observable_name(obs: Observable) -> &'static str {
    match obs {
        Observable::FinalCoherence => "final_coherence",
        Observable::FinalRho22 => "final_rho22",
        Observable::AntistokesPeak => "antistokes_peak",
    }
}

fn set_ccars(cfg: &mut CcarsConfig, name: AxisName, v: f64) {
    match name {
        AxisName::Omega3_0 => cfg.omega3_0 = v,
        AxisName::ChirpRatio => cfg.chirp_ratio = v,
        AxisName::TwoPhoton => cfg.two_photon = v,
        AxisName::Delta => cfg.delta = v,
        AxisName::Tau0 => cfg.tau0 = v,
        AxisName::Amplitude | AxisName::Period => {}
    }
}

fn set_propagate(cfg: &mut PropagateConfig, name: AxisName, v: f64) {
    match name {
        AxisName::Amplitude => cfg.amplitudes = [v; 3],
        AxisName::ChirpRatio => cfg.chirp_ratio = v,
        AxisName::TwoPhoton => cfg.two_photon = v,
        AxisName::Delta => cfg.delta = v,
        AxisName::Tau0 => cfg.tau0 = v,
        AxisName::Period => cfg.period = v,
        AxisName::Omega3_0 => {}
    }
}

/// Final value of `obs` for one C-CARS run.
pub fn ccars_observable(cfg: &CcarsConfig, four_level: bool, obs: Observable) -> Result<f64> {
    let (coherence, rho22) = if four_level {
        let last = *run_ccars4(cfg, usize::MAX)?.last();
        (last.get(0, 1).norm(), last.get(1, 1).re)
    } else {
        let last = *run_ccars2(cfg, usize::MAX)?.last();
        (last.get(0, 1).norm(), last.get(1, 1).re)
    };
    match obs {
        Observable::FinalCoherence => Ok(coherence),
        Observable::FinalRho22 => Ok(rho22),
        Observable::AntistokesPeak => Err(Error::param("observable", "antistokes_peak needs a propagation run")),
    }
}

fn propagate_observable(cfg: &PropagateConfig, obs: Observable) -> Result<f64> {
    let (_, run) = run_propagation(cfg)?;
    let last = run.records.last().ok_or_else(|| Error::param("layers", "no layers"))?;
    match obs {
        Observable::AntistokesPeak => Ok(last.anti_stokes_peak),
        Observable::FinalCoherence => Ok(last.final_abs_rho12),
        Observable::FinalRho22 => Err(Error::param("observable", "final_rho22 is not recorded by propagation runs")),
    }
}

fn grid_points(spec: &ScanSpec) -> Vec<(f64, f64)> {
    let ys = spec.axis2.values();
    spec.axis1.values().into_iter().flat_map(|x| ys.iter().map(move |&y| (x, y))).collect()
}

/// Evaluates `cell` at every grid point in parallel. Failed cells become NaN
/// and are logged.
fn map_cells<F>(spec: &ScanSpec, cell: F) -> Vec<ScanCell>
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
{
    grid_points(spec)
        .into_par_iter()
        .map(|(x, y)| {
            let value = cell(x, y).unwrap_or_else(|e| {
                log::warn!("cell {}={x}, {}={y} failed: {e}", spec.axis1.name.as_str(), spec.axis2.name.as_str());
                f64::NAN
            });
            ScanCell { x, y, value }
        })
        .collect()
}

fn ccars_cell(base: &CcarsConfig, spec: &ScanSpec, x: f64, y: f64) -> CcarsConfig {
    let mut cfg = base.clone();
    set_ccars(&mut cfg, spec.axis1.name, x);
    set_ccars(&mut cfg, spec.axis2.name, y);
    cfg
}

fn missing(what: &str) -> Error {
    Error::Config {
        path: format!("run.{what}"),
        message: "required by the scan model".into(),
    }
}

pub fn scan2d(cfg: &ScanConfig) -> Result<ScanGrid> {
    let spec = cfg.spec();
    let cells = match cfg.model {
        ScanModel::TwoLevel | ScanModel::FourLevel => {
            let base = cfg.ccars.as_ref().ok_or_else(|| missing("ccars"))?;
            let four = cfg.model == ScanModel::FourLevel;
            map_cells(&spec, |x, y| ccars_observable(&ccars_cell(base, &spec, x, y), four, spec.observable))
        }
        ScanModel::Propagate => {
            let base = cfg.propagate.as_ref().ok_or_else(|| missing("propagate"))?;
            map_cells(&spec, |x, y| {
                let mut c = base.clone();
                set_propagate(&mut c, spec.axis1.name, x);
                set_propagate(&mut c, spec.axis2.name, y);
                propagate_observable(&c, spec.observable)
            })
        }
    };
    Ok(ScanGrid { spec, cells })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonCell {
    pub x: f64,
    pub y: f64,
    pub two_level: f64,
    pub four_level: f64,
    pub diff: f64,
    pub inside_band: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelComparison {
    pub spec: ScanSpec,
    pub cells: Vec<ComparisonCell>,
}

impl ModelComparison {
    /// Largest finite difference inside (`true`) or outside the chirp band,
    /// NaN when the region is empty.
    pub fn max_diff(&self, inside: bool) -> f64 {
        self.cells
            .iter()
            .filter(|c| c.inside_band == inside && c.diff.is_finite())
            .map(|c| c.diff)
            .fold(f64::NAN, f64::max)
    }

    pub fn region_size(&self, inside: bool) -> usize {
        self.cells.iter().filter(|c| c.inside_band == inside).count()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            self.spec.axis1.name.as_str(),
            self.spec.axis2.name.as_str(),
            "two_level",
            "four_level",
            "abs_diff",
            "inside_band",
        ])?;
        for c in &self.cells {
            w.serialize((c.x, c.y, c.two_level, c.four_level, c.diff, c.inside_band))?;
        }
        w.flush()?;
        Ok(())
    }

    /// `region,cells,max_abs_diff` rows for the two chirp regions.
    pub fn write_summary_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["region", "cells", "max_abs_diff"])?;
        w.serialize(("inside_band", self.region_size(true), self.max_diff(true)))?;
        w.serialize(("outside_band", self.region_size(false), self.max_diff(false)))?;
        w.flush()?;
        Ok(())
    }
}

/// Runs the two-level and four-level models on the same grid and reports the
/// per-cell difference of the observable.
pub fn compare_models(cfg: &ScanConfig) -> Result<ModelComparison> {
    if cfg.model == ScanModel::Propagate {
        return Err(Error::Config {
            path: "run.model".into(),
            message: "model comparison needs a two_level or four_level base".into(),
        });
    }
    let base = cfg.ccars.as_ref().ok_or_else(|| missing("ccars"))?;
    let spec = cfg.spec();
    let pairs: Vec<(f64, f64, f64, f64)> = grid_points(&spec)
        .into_par_iter()
        .map(|(x, y)| {
            let c = ccars_cell(base, &spec, x, y);
            let eval = |four| {
                ccars_observable(&c, four, spec.observable).unwrap_or_else(|e| {
                    log::warn!("cell {x}, {y} ({} levels) failed: {e}", if four { 4 } else { 2 });
                    f64::NAN
                })
            };
            (x, y, eval(false), eval(true))
        })
        .collect();
    let cells = pairs
        .into_iter()
        .map(|(x, y, two_level, four_level)| {
            let ratio = ccars_cell(base, &spec, x, y).chirp_ratio;
            ComparisonCell {
                x,
                y,
                two_level,
                four_level,
                diff: (two_level - four_level).abs(),
                inside_band: ratio.abs() < CHIRP_BAND,
            }
        })
        .collect();
    Ok(ModelComparison { spec, cells })
}
