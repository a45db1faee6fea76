//! CSV and manifest writers.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::dynamics::Trajectory;
use crate::error::Result;

pub const TRAJECTORY_COLUMNS: [&str; 8] = ["t", "rho11", "rho22", "rho33", "rho44", "re_rho12", "im_rho12", "abs_rho12"];

/// Writes the fixed trajectory columns. Levels beyond `N` are written as 0.
pub fn write_trajectory_csv<const N: usize, W: Write>(traj: &Trajectory<N>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRAJECTORY_COLUMNS)?;
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let pop = |k: usize| if k < N { s.get(k, k).re } else { 0.0 };
        let c = s.get(0, 1);
        w.serialize((t, pop(0), pop(1), pop(2), pop(3), c.re, c.im, c.norm()))?;
    }
    w.flush()?;
    Ok(())
}

/// Record of one run: the normalized config, code version, timing and files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub code_version: String,
    pub scenario: String,
    pub command: String,
    /// Configuration in natural units; re-running it reproduces the CSVs.
    pub config: RunConfig,
    pub wall_time_s: f64,
    /// Output files relative to the output directory.
    pub outputs: Vec<String>,
    pub summary: serde_json::Value,
}

pub const MANIFEST_FILE: &str = "manifest.json";
pub const CONFIG_ECHO_FILE: &str = "config.json";

/// Collects the files written into one output directory.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    written: Vec<String>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self> {
        std::fs::create_dir_all(root)?;
        Ok(Self {
            root: root.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Opens `name` for writing and records it.
    pub fn file(&mut self, name: &str) -> Result<BufWriter<File>> {
        let f = File::create(self.root.join(name))?;
        self.written.push(name.to_string());
        Ok(BufWriter::new(f))
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut f = self.file(name)?;
        serde_json::to_writer_pretty(&mut f, value)?;
        f.write_all(b"\n")?;
        f.flush()?;
        Ok(())
    }

    pub fn written(&self) -> &[String] {
        &self.written
    }

    /// Writes the manifest, which is not listed among the outputs.
    pub fn write_manifest(&self, manifest: &Manifest) -> Result<()> {
        let mut f = BufWriter::new(File::create(self.root.join(MANIFEST_FILE))?);
        serde_json::to_writer_pretty(&mut f, manifest)?;
        f.write_all(b"\n")?;
        f.flush()?;
        Ok(())
    }
}
