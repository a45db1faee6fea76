//! Run configuration files.
//!
//! A configuration is a JSON document with a schema version, an optional
//! SI-units flag and one scenario under `run`. Unknown keys are rejected and
//! every error names the offending field path.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dynamics::RelaxationRates;
use crate::error::{Error, Result};
use crate::phase::PhaseSuiteConfig;
use crate::propagation::{LayerSpec, MediumParams, CALIBRATED_CENTRAL_SPACING, DEFAULT_FLOOR_WIDTHS};
use crate::pulse::{Carriers, ChirpScheme};
use crate::units;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub version: u32,
    /// Frequencies in THz, times in fs and chirp rates in THz/fs when set.
    #[serde(default)]
    pub si_units: bool,
    pub run: Scenario,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scenario", rename_all = "snake_case")]
pub enum Scenario {
    Ccars2(CcarsConfig),
    Ccars4(CcarsConfig),
    Stirap3(StirapConfig),
    Stirap4(StirapConfig),
    Fstirap(FStirapConfig),
    Propagate(PropagateConfig),
    Wigner(WignerConfig),
    Phasefit(PhasefitConfig),
    Scan(ScanConfig),
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Ccars2(_) => "ccars2",
            Scenario::Ccars4(_) => "ccars4",
            Scenario::Stirap3(_) => "stirap3",
            Scenario::Stirap4(_) => "stirap4",
            Scenario::Fstirap(_) => "fstirap",
            Scenario::Propagate(_) => "propagate",
            Scenario::Wigner(_) => "wigner",
            Scenario::Phasefit(_) => "phasefit",
            Scenario::Scan(_) => "scan",
        }
    }
}

/// Uniform grid spanning `span` pulse widths on each side of the center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub span: f64,
    pub steps_per_width: usize,
    pub record_every: usize,
}

impl GridConfig {
    pub fn ccars() -> Self {
        Self {
            span: 5.0,
            steps_per_width: 2000,
            record_every: 5,
        }
    }

    pub fn stirap() -> Self {
        Self {
            span: 3.0,
            steps_per_width: 10000,
            record_every: 50,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateKind {
    Decay,
    Dephasing,
}

/// One relaxation channel between one-based levels `upper > lower`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateEntry {
    pub kind: RateKind,
    pub upper: usize,
    pub lower: usize,
    pub rate: f64,
}

pub fn relaxation_rates(entries: &[RateEntry]) -> RelaxationRates {
    entries.iter().fold(RelaxationRates::none(), |r, e| match e.kind {
        RateKind::Decay => r.with_decay(e.upper, e.lower, e.rate),
        RateKind::Dephasing => r.with_dephasing(e.upper, e.lower, e.rate),
    })
}

/// Single C-CARS pulse set, used by both the two-level and four-level models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CcarsConfig {
    /// Peak two-photon Rabi frequency of the balanced pulse set.
    pub omega3_0: f64,
    /// One-photon detuning shared by the Stokes and anti-Stokes transitions.
    pub delta: f64,
    #[serde(default)]
    pub two_photon: f64,
    pub tau0: f64,
    /// Spectral chirp of the Stokes pulse over `tau0^2`.
    pub chirp_ratio: f64,
    #[serde(default = "default_scheme")]
    pub scheme: ChirpScheme,
    #[serde(default = "GridConfig::ccars")]
    pub grid: GridConfig,
    #[serde(default)]
    pub relaxation: Vec<RateEntry>,
}

fn default_scheme() -> ChirpScheme {
    ChirpScheme::CCars
}

/// Three-level STIRAP, or the four-level variant when `splitting` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StirapConfig {
    pub omega0: f64,
    pub width: f64,
    /// Pump center minus Stokes center.
    pub separation: f64,
    #[serde(default)]
    pub detuning: f64,
    #[serde(default)]
    pub two_photon: f64,
    #[serde(default)]
    pub alpha: f64,
    #[serde(default)]
    pub beta: f64,
    #[serde(default)]
    pub splitting: Option<f64>,
    #[serde(default = "GridConfig::stirap")]
    pub grid: GridConfig,
    #[serde(default)]
    pub relaxation: Vec<RateEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FStirapConfig {
    pub omega0: f64,
    pub mixing_angle: f64,
    pub t_p: f64,
    pub tau: f64,
    #[serde(default)]
    pub detuning: f64,
    #[serde(default)]
    pub two_photon: f64,
    #[serde(default = "GridConfig::stirap")]
    pub grid: GridConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayersConfig {
    /// Width of the density profile, m.
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    /// Distance of the cloud center from the source, m.
    #[serde(default = "default_z0")]
    pub z0: f64,
    #[serde(default = "default_spacing")]
    pub central_spacing: f64,
    #[serde(default = "default_floor")]
    pub floor_widths: f64,
    /// Keeps only the first layers when set.
    #[serde(default)]
    pub max_layers: Option<usize>,
}

fn default_sigma() -> f64 {
    0.2
}
fn default_z0() -> f64 {
    1000.0
}
fn default_spacing() -> f64 {
    CALIBRATED_CENTRAL_SPACING
}
fn default_floor() -> f64 {
    DEFAULT_FLOOR_WIDTHS
}

impl Default for LayersConfig {
    fn default() -> Self {
        Self {
            sigma: default_sigma(),
            z0: default_z0(),
            central_spacing: default_spacing(),
            floor_widths: default_floor(),
            max_layers: None,
        }
    }
}

impl LayersConfig {
    pub fn spec(&self) -> LayerSpec {
        LayerSpec {
            central_spacing: self.central_spacing,
            floor_widths: self.floor_widths,
            ..LayerSpec::methanol(self.sigma, self.z0)
        }
    }
}

/// Pulse train sent through the layered medium.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropagateConfig {
    /// Peak Rabi frequencies of pump, Stokes and probe.
    pub amplitudes: [f64; 3],
    pub tau0: f64,
    pub chirp_ratio: f64,
    #[serde(default = "default_scheme")]
    pub scheme: ChirpScheme,
    #[serde(default)]
    pub carriers: Carriers,
    pub period: f64,
    pub count: usize,
    pub delta: f64,
    #[serde(default)]
    pub two_photon: f64,
    #[serde(default = "default_step")]
    pub step: f64,
    #[serde(default = "default_span")]
    pub span_taus: f64,
    #[serde(default)]
    pub layers: LayersConfig,
    #[serde(default = "MediumParams::methanol")]
    pub medium: MediumParams,
    #[serde(default)]
    pub relaxation: Vec<RateEntry>,
    /// Field snapshot interval in layers, 0 for none.
    #[serde(default)]
    pub snapshot_every: usize,
}

fn default_step() -> f64 {
    0.01
}
fn default_span() -> f64 {
    6.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisRange {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisRange {
    pub fn values(&self) -> Vec<f64> {
        if self.count < 2 {
            return vec![self.min; self.count];
        }
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count).map(|k| self.min + k as f64 * step).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WignerMethod {
    ClosedForm,
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WignerConfig {
    pub amplitude: f64,
    pub carrier: f64,
    pub tau0: f64,
    /// Spectral chirp `alpha'`.
    pub alpha_prime: f64,
    #[serde(default)]
    pub center: f64,
    pub times: AxisRange,
    pub freqs: AxisRange,
    #[serde(default = "default_method")]
    pub method: WignerMethod,
    /// Sampling step of the field for the numeric method.
    #[serde(default = "default_wigner_step")]
    pub sample_step: f64,
}

fn default_method() -> WignerMethod {
    WignerMethod::ClosedForm
}
fn default_wigner_step() -> f64 {
    0.05
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhasefitConfig {
    /// Suite definition; the checked-in suite when absent.
    #[serde(default)]
    pub suite: Option<PhaseSuiteConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanModel {
    TwoLevel,
    FourLevel,
    Propagate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    FinalCoherence,
    FinalRho22,
    AntistokesPeak,
}

/// Scan parameter names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisName {
    Omega3_0,
    ChirpRatio,
    TwoPhoton,
    Delta,
    Tau0,
    Amplitude,
    Period,
}

impl AxisName {
    pub fn as_str(self) -> &'static str {
        match self {
            AxisName::Omega3_0 => "omega3_0",
            AxisName::ChirpRatio => "chirp_ratio",
            AxisName::TwoPhoton => "two_photon",
            AxisName::Delta => "delta",
            AxisName::Tau0 => "tau0",
            AxisName::Amplitude => "amplitude",
            AxisName::Period => "period",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub name: AxisName,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        AxisRange {
            min: self.min,
            max: self.max,
            count: self.count,
        }
        .values()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSpec {
    pub axis1: Axis,
    pub axis2: Axis,
    pub observable: Observable,
}

/// A 2-D scan over a base C-CARS or propagation configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub model: ScanModel,
    #[serde(default)]
    pub ccars: Option<CcarsConfig>,
    #[serde(default)]
    pub propagate: Option<PropagateConfig>,
    pub axis1: Axis,
    pub axis2: Axis,
    pub observable: Observable,
}

impl ScanConfig {
    pub fn spec(&self) -> ScanSpec {
        ScanSpec {
            axis1: self.axis1,
            axis2: self.axis2,
            observable: self.observable,
        }
    }
}

fn bad(path: &str, message: impl Into<String>) -> Error {
    Error::Config {
        path: path.to_string(),
        message: message.into(),
    }
}

fn positive(path: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(bad(path, format!("must be positive and finite, got {v}")))
    }
}

fn finite(path: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(bad(path, format!("must be finite, got {v}")))
    }
}

fn check_grid(path: &str, g: &GridConfig) -> Result<()> {
    positive(&format!("{path}.span"), g.span)?;
    if g.steps_per_width == 0 {
        return Err(bad(&format!("{path}.steps_per_width"), "must be at least 1"));
    }
    if g.record_every == 0 {
        return Err(bad(&format!("{path}.record_every"), "must be at least 1"));
    }
    Ok(())
}

fn check_rates(path: &str, levels: usize, entries: &[RateEntry]) -> Result<()> {
    for (i, e) in entries.iter().enumerate() {
        let p = format!("{path}[{i}]");
        if !(1..=levels).contains(&e.lower) || !(1..=levels).contains(&e.upper) || e.upper <= e.lower {
            return Err(bad(&p, format!("need 1 <= lower < upper <= {levels}, got upper {} lower {}", e.upper, e.lower)));
        }
        if !(e.rate >= 0.0 && e.rate.is_finite()) {
            return Err(bad(&format!("{p}.rate"), format!("must be non-negative, got {}", e.rate)));
        }
    }
    Ok(())
}

fn check_axis(path: &str, a: &Axis) -> Result<()> {
    finite(&format!("{path}.min"), a.min)?;
    finite(&format!("{path}.max"), a.max)?;
    if a.count < 2 {
        return Err(bad(&format!("{path}.count"), format!("must be at least 2, got {}", a.count)));
    }
    Ok(())
}

fn check_range(path: &str, a: &AxisRange) -> Result<()> {
    finite(&format!("{path}.min"), a.min)?;
    finite(&format!("{path}.max"), a.max)?;
    if a.count < 2 || !(a.max > a.min) {
        return Err(bad(path, "need max > min and count >= 2"));
    }
    Ok(())
}

impl CcarsConfig {
    fn validate(&self, path: &str) -> Result<()> {
        finite(&format!("{path}.omega3_0"), self.omega3_0)?;
        finite(&format!("{path}.delta"), self.delta)?;
        if self.delta == 0.0 {
            return Err(bad(&format!("{path}.delta"), "must be non-zero"));
        }
        if self.omega3_0 * self.delta < 0.0 {
            return Err(bad(&format!("{path}.omega3_0"), "sign must match delta"));
        }
        finite(&format!("{path}.two_photon"), self.two_photon)?;
        positive(&format!("{path}.tau0"), self.tau0)?;
        finite(&format!("{path}.chirp_ratio"), self.chirp_ratio)?;
        check_grid(&format!("{path}.grid"), &self.grid)?;
        check_rates(&format!("{path}.relaxation"), 4, &self.relaxation)
    }

    fn to_natural(&mut self) {
        self.omega3_0 = units::thz_to_natural(self.omega3_0);
        self.delta = units::thz_to_natural(self.delta);
        self.two_photon = units::thz_to_natural(self.two_photon);
        self.tau0 = units::fs_to_natural(self.tau0);
        rates_to_natural(&mut self.relaxation);
    }
}

fn rates_to_natural(entries: &mut [RateEntry]) {
    for e in entries {
        e.rate = units::thz_to_natural(e.rate);
    }
}

impl StirapConfig {
    fn validate(&self, path: &str, four_level: bool) -> Result<()> {
        positive(&format!("{path}.omega0"), self.omega0)?;
        positive(&format!("{path}.width"), self.width)?;
        for (name, v) in [
            ("separation", self.separation),
            ("detuning", self.detuning),
            ("two_photon", self.two_photon),
            ("alpha", self.alpha),
            ("beta", self.beta),
        ] {
            finite(&format!("{path}.{name}"), v)?;
        }
        match (four_level, self.splitting) {
            (true, None) => return Err(bad(&format!("{path}.splitting"), "required for stirap4")),
            (false, Some(_)) => return Err(bad(&format!("{path}.splitting"), "only valid for stirap4")),
            (_, Some(s)) => finite(&format!("{path}.splitting"), s)?,
            _ => {}
        }
        check_grid(&format!("{path}.grid"), &self.grid)?;
        check_rates(&format!("{path}.relaxation"), if four_level { 4 } else { 3 }, &self.relaxation)
    }

    fn to_natural(&mut self) {
        self.omega0 = units::thz_to_natural(self.omega0);
        self.width = units::fs_to_natural(self.width);
        self.separation = units::fs_to_natural(self.separation);
        self.detuning = units::thz_to_natural(self.detuning);
        self.two_photon = units::thz_to_natural(self.two_photon);
        self.alpha = units::thz_per_fs_to_natural(self.alpha);
        self.beta = units::thz_per_fs_to_natural(self.beta);
        self.splitting = self.splitting.map(units::thz_to_natural);
        rates_to_natural(&mut self.relaxation);
    }
}

impl FStirapConfig {
    fn validate(&self, path: &str) -> Result<()> {
        positive(&format!("{path}.omega0"), self.omega0)?;
        positive(&format!("{path}.tau"), self.tau)?;
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&self.mixing_angle) {
            return Err(bad(&format!("{path}.mixing_angle"), "must lie in [0, pi/2]"));
        }
        finite(&format!("{path}.t_p"), self.t_p)?;
        finite(&format!("{path}.detuning"), self.detuning)?;
        finite(&format!("{path}.two_photon"), self.two_photon)?;
        check_grid(&format!("{path}.grid"), &self.grid)
    }

    fn to_natural(&mut self) {
        self.omega0 = units::thz_to_natural(self.omega0);
        self.t_p = units::fs_to_natural(self.t_p);
        self.tau = units::fs_to_natural(self.tau);
        self.detuning = units::thz_to_natural(self.detuning);
        self.two_photon = units::thz_to_natural(self.two_photon);
    }
}

impl PropagateConfig {
    fn validate(&self, path: &str) -> Result<()> {
        for (i, a) in self.amplitudes.iter().enumerate() {
            finite(&format!("{path}.amplitudes[{i}]"), *a)?;
        }
        positive(&format!("{path}.tau0"), self.tau0)?;
        finite(&format!("{path}.chirp_ratio"), self.chirp_ratio)?;
        positive(&format!("{path}.period"), self.period)?;
        if self.count == 0 {
            return Err(bad(&format!("{path}.count"), "must be at least 1"));
        }
        finite(&format!("{path}.delta"), self.delta)?;
        finite(&format!("{path}.two_photon"), self.two_photon)?;
        positive(&format!("{path}.step"), self.step)?;
        positive(&format!("{path}.span_taus"), self.span_taus)?;
        positive(&format!("{path}.layers.sigma"), self.layers.sigma)?;
        finite(&format!("{path}.layers.z0"), self.layers.z0)?;
        positive(&format!("{path}.layers.central_spacing"), self.layers.central_spacing)?;
        positive(&format!("{path}.layers.floor_widths"), self.layers.floor_widths)?;
        if self.layers.max_layers == Some(0) {
            return Err(bad(&format!("{path}.layers.max_layers"), "must be at least 1"));
        }
        if !(self.medium.extinction >= 0.0) || !(self.medium.path_km >= 0.0) {
            return Err(bad(&format!("{path}.medium"), "extinction and path_km must be non-negative"));
        }
        check_rates(&format!("{path}.relaxation"), 4, &self.relaxation)
    }

    fn to_natural(&mut self) {
        for a in &mut self.amplitudes {
            *a = units::thz_to_natural(*a);
        }
        self.tau0 = units::fs_to_natural(self.tau0);
        self.carriers = Carriers {
            pump: units::thz_to_natural(self.carriers.pump),
            stokes: units::thz_to_natural(self.carriers.stokes),
            probe: units::thz_to_natural(self.carriers.probe),
        };
        self.period = units::fs_to_natural(self.period);
        self.delta = units::thz_to_natural(self.delta);
        self.two_photon = units::thz_to_natural(self.two_photon);
        self.step = units::fs_to_natural(self.step);
        rates_to_natural(&mut self.relaxation);
    }
}

impl WignerConfig {
    fn validate(&self, path: &str) -> Result<()> {
        finite(&format!("{path}.amplitude"), self.amplitude)?;
        positive(&format!("{path}.carrier"), self.carrier)?;
        positive(&format!("{path}.tau0"), self.tau0)?;
        finite(&format!("{path}.alpha_prime"), self.alpha_prime)?;
        finite(&format!("{path}.center"), self.center)?;
        check_range(&format!("{path}.times"), &self.times)?;
        check_range(&format!("{path}.freqs"), &self.freqs)?;
        positive(&format!("{path}.sample_step"), self.sample_step)?;
        if self.method == WignerMethod::Numeric {
            let ratio = (self.times.max - self.times.min) / (self.times.count - 1) as f64 / self.sample_step;
            if (ratio - ratio.round()).abs() > 1e-6 || ratio.round() < 1.0 {
                return Err(bad(&format!("{path}.times"), "time spacing must be a multiple of sample_step"));
            }
        }
        Ok(())
    }

    fn to_natural(&mut self) {
        self.carrier = units::thz_to_natural(self.carrier);
        self.tau0 = units::fs_to_natural(self.tau0);
        // fs^2 spectral chirp
        self.alpha_prime = units::fs_to_natural(units::fs_to_natural(self.alpha_prime));
        self.center = units::fs_to_natural(self.center);
        for r in [&mut self.times] {
            r.min = units::fs_to_natural(r.min);
            r.max = units::fs_to_natural(r.max);
        }
        self.freqs.min = units::thz_to_natural(self.freqs.min);
        self.freqs.max = units::thz_to_natural(self.freqs.max);
        self.sample_step = units::fs_to_natural(self.sample_step);
    }
}

fn axis_to_natural(a: &mut Axis) {
    let f: fn(f64) -> f64 = match a.name {
        AxisName::Omega3_0 | AxisName::TwoPhoton | AxisName::Delta | AxisName::Amplitude => units::thz_to_natural,
        AxisName::Tau0 | AxisName::Period => units::fs_to_natural,
        AxisName::ChirpRatio => return,
    };
    a.min = f(a.min);
    a.max = f(a.max);
}

impl ScanConfig {
    fn validate(&self, path: &str) -> Result<()> {
        check_axis(&format!("{path}.axis1"), &self.axis1)?;
        check_axis(&format!("{path}.axis2"), &self.axis2)?;
        let propagating = self.model == ScanModel::Propagate;
        for (key, axis) in [("axis1", &self.axis1), ("axis2", &self.axis2)] {
            let ok = match axis.name {
                AxisName::Omega3_0 => !propagating,
                AxisName::Amplitude | AxisName::Period => propagating,
                _ => true,
            };
            if !ok {
                return Err(bad(&format!("{path}.{key}.name"), format!("`{}` does not apply to this model", axis.name.as_str())));
            }
        }
        if propagating {
            let base = self.propagate.as_ref().ok_or_else(|| bad(&format!("{path}.propagate"), "required for the propagate model"))?;
            base.validate(&format!("{path}.propagate"))?;
        } else {
            if self.observable == Observable::AntistokesPeak {
                return Err(bad(&format!("{path}.observable"), "antistokes_peak needs the propagate model"));
            }
            let base = self.ccars.as_ref().ok_or_else(|| bad(&format!("{path}.ccars"), "required for two_level and four_level models"))?;
            base.validate(&format!("{path}.ccars"))?;
        }
        Ok(())
    }

    fn to_natural(&mut self) {
        if let Some(c) = &mut self.ccars {
            c.to_natural();
        }
        if let Some(p) = &mut self.propagate {
            p.to_natural();
        }
        axis_to_natural(&mut self.axis1);
        axis_to_natural(&mut self.axis2);
    }
}

impl RunConfig {
    /// Parses, converts SI inputs when requested (or `force_si`) and validates.
    pub fn from_json(text: &str, force_si: bool) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let mut cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::Config {
                path,
                message: e.into_inner().to_string(),
            }
        })?;
        if cfg.version != SCHEMA_VERSION {
            return Err(bad("version", format!("unsupported schema version {}, expected {SCHEMA_VERSION}", cfg.version)));
        }
        if force_si {
            cfg.si_units = true;
        }
        if cfg.si_units {
            cfg.to_natural();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path, force_si: bool) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text, force_si)
    }

    /// Converts every dimensional field to natural units and clears the flag.
    fn to_natural(&mut self) {
        match &mut self.run {
            Scenario::Ccars2(c) | Scenario::Ccars4(c) => c.to_natural(),
            Scenario::Stirap3(c) | Scenario::Stirap4(c) => c.to_natural(),
            Scenario::Fstirap(c) => c.to_natural(),
            Scenario::Propagate(c) => c.to_natural(),
            Scenario::Wigner(c) => c.to_natural(),
            Scenario::Phasefit(_) => {}
            Scenario::Scan(c) => c.to_natural(),
        }
        self.si_units = false;
    }

    pub fn validate(&self) -> Result<()> {
        match &self.run {
            Scenario::Ccars2(c) | Scenario::Ccars4(c) => c.validate("run"),
            Scenario::Stirap3(c) => c.validate("run", false),
            Scenario::Stirap4(c) => c.validate("run", true),
            Scenario::Fstirap(c) => c.validate("run"),
            Scenario::Propagate(c) => c.validate("run"),
            Scenario::Wigner(c) => c.validate("run"),
            Scenario::Phasefit(c) => match &c.suite {
                Some(s) if s.samples_per_kind == 0 => Err(bad("run.suite.samples_per_kind", "must be at least 1")),
                Some(s) if !(s.t_end > s.t_start) || s.samples < 16 => Err(bad("run.suite", "need t_end > t_start and at least 16 samples")),
                _ => Ok(()),
            },
            Scenario::Scan(c) => c.validate("run"),
        }
    }
}
