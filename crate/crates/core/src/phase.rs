//! Phase recovery, phase-kind classification and chirp regression for sampled
//! pulses.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::{analytic_signal, high_band_fraction, unwrap};

/// Fitting window: samples whose envelope is at least this fraction of the peak.
pub const WINDOW_FRACTION: f64 = 0.05;

/// A richer model must cut the weighted rms by this factor...
pub const MODEL_GAIN: f64 = 0.95;

/// ...and by at least this much, in radians.
pub const MODEL_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PhaseKind {
    Linear,
    Second,
    Roof,
}

impl PhaseKind {
    pub const ALL: [PhaseKind; 3] = [PhaseKind::Linear, PhaseKind::Second, PhaseKind::Roof];

    pub fn index(self) -> usize {
        match self {
            PhaseKind::Linear => 0,
            PhaseKind::Second => 1,
            PhaseKind::Roof => 2,
        }
    }

    pub fn arity(self) -> usize {
        match self {
            PhaseKind::Linear => 2,
            _ => 3,
        }
    }
}

/// Phase modulation `M(t)` without the constant term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PhaseModel {
    /// `a1 t + a2 t^2`
    Linear { a1: f64, a2: f64 },
    /// `a1 t + a2 t^2 + a3 t^3`
    Second { a1: f64, a2: f64, a3: f64 },
    /// `a1 t + before t^2` for `t <= 0`, `a1 t + after t^2` for `t > 0`
    Roof { a1: f64, before: f64, after: f64 },
}

impl PhaseModel {
    pub fn from_params(kind: PhaseKind, p: &[f64]) -> Result<Self> {
        if p.len() != kind.arity() {
            return Err(Error::param(
                "params",
                format!("{kind:?} takes {} parameters, got {}", kind.arity(), p.len()),
            ));
        }
        Ok(match kind {
            PhaseKind::Linear => PhaseModel::Linear { a1: p[0], a2: p[1] },
            PhaseKind::Second => PhaseModel::Second {
                a1: p[0],
                a2: p[1],
                a3: p[2],
            },
            PhaseKind::Roof => PhaseModel::Roof {
                a1: p[0],
                before: p[1],
                after: p[2],
            },
        })
    }

    pub fn kind(&self) -> PhaseKind {
        match self {
            PhaseModel::Linear { .. } => PhaseKind::Linear,
            PhaseModel::Second { .. } => PhaseKind::Second,
            PhaseModel::Roof { .. } => PhaseKind::Roof,
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            PhaseModel::Linear { a1, a2 } => vec![a1, a2],
            PhaseModel::Second { a1, a2, a3 } => vec![a1, a2, a3],
            PhaseModel::Roof { a1, before, after } => vec![a1, before, after],
        }
    }

    pub fn phase(&self, t: f64) -> f64 {
        match *self {
            PhaseModel::Linear { a1, a2 } => a1 * t + a2 * t * t,
            PhaseModel::Second { a1, a2, a3 } => a1 * t + a2 * t * t + a3 * t * t * t,
            PhaseModel::Roof { a1, before, after } => a1 * t + if t <= 0.0 { before } else { after } * t * t,
        }
    }

    /// Closest model of another kind: missing terms are zero, a single
    /// quadratic rate becomes both roof rates, and roof rates average.
    pub fn as_kind(&self, kind: PhaseKind) -> Self {
        let (a1, before, after, a3) = match *self {
            PhaseModel::Linear { a1, a2 } => (a1, a2, a2, 0.0),
            PhaseModel::Second { a1, a2, a3 } => (a1, a2, a2, a3),
            PhaseModel::Roof { a1, before, after } => (a1, before, after, 0.0),
        };
        let mid = 0.5 * (before + after);
        match kind {
            PhaseKind::Linear => PhaseModel::Linear { a1, a2: mid },
            PhaseKind::Second => PhaseModel::Second { a1, a2: mid, a3 },
            PhaseKind::Roof => PhaseModel::Roof { a1, before, after },
        }
    }
}

/// A sampled real field `E0 exp(-(t-center)^2/2τ^2) cos(ω t + M(t))`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSample {
    pub start: f64,
    pub step: f64,
    pub values: Vec<f64>,
    /// Origin of the phase polynomial.
    pub center: f64,
    pub truth: Option<PhaseModel>,
}

impl PhaseSample {
    pub fn new(start: f64, step: f64, values: Vec<f64>, center: f64) -> Self {
        Self {
            start,
            step,
            values,
            center,
            truth: None,
        }
    }

    pub fn time(&self, k: usize) -> f64 {
        self.start + k as f64 * self.step
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * factor).collect(),
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    pub tau: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub samples: usize,
}

/// Synthesizes a unit-peak pulse with phase `offset + M(t)` and additive
/// Gaussian noise of standard deviation `noise` (relative to the peak).
pub fn generate_sample<R: Rng + ?Sized>(
    model: PhaseModel,
    grid: &SampleGrid,
    offset: f64,
    noise: f64,
    rng: &mut R,
) -> Result<PhaseSample> {
    if grid.samples < 8 || !(grid.t_end > grid.t_start) || !(grid.tau > 0.0) {
        return Err(Error::param("grid", "need tau > 0, t_end > t_start and at least 8 samples"));
    }
    let step = (grid.t_end - grid.t_start) / (grid.samples - 1) as f64;
    let values = (0..grid.samples)
        .map(|k| {
            let t = grid.t_start + k as f64 * step;
            let clean = (-t * t / (2.0 * grid.tau * grid.tau)).exp() * (offset + model.phase(t)).cos();
            if noise > 0.0 {
                let n: f64 = rng.sample(StandardNormal);
                clean + noise * n
            } else {
                clean
            }
        })
        .collect();
    Ok(PhaseSample {
        start: grid.t_start,
        step,
        values,
        center: 0.0,
        truth: Some(model),
    })
}

/// Unwrapped instantaneous phase on the fitting window.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSeries {
    /// Times relative to the sample center.
    pub times: Vec<f64>,
    pub phase: Vec<f64>,
    /// Squared envelope.
    pub weights: Vec<f64>,
}

/// Recovers the phase by demodulating the analytic signal against its mean
/// carrier and unwrapping. The branch is chosen so the phase nearest the
/// center lies in `[-π, π]`.
pub fn extract_phase(sample: &PhaseSample) -> Result<PhaseSeries> {
    let leak = high_band_fraction(&sample.values);
    if leak > 1e-2 {
        return Err(Error::param(
            "sample",
            format!("undersampled: {leak:e} of the power lies above an eighth of the sample rate"),
        ));
    }
    let z = analytic_signal(&sample.values);
    let peak = z.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if !(peak > 0.0) {
        return Err(Error::param("sample", "field is identically zero"));
    }
    let window: Vec<usize> = (0..z.len()).filter(|&k| z[k].norm() >= WINDOW_FRACTION * peak).collect();
    let (first, last) = match (window.first(), window.last()) {
        (Some(&a), Some(&b)) if b > a + 4 => (a, b),
        _ => return Err(Error::param("sample", "envelope window is too short")),
    };
    if (first..=last).any(|k| z[k].norm() < 1e-3 * peak) {
        return Err(Error::param("sample", "envelope drops below 1e-3 of the peak inside the window"));
    }
    let mut acc = C64::new(0.0, 0.0);
    for k in first..last {
        acc += z[k + 1] * z[k].conj();
    }
    let carrier = acc.arg() / sample.step;
    let times: Vec<f64> = (first..=last).map(|k| sample.time(k) - sample.center).collect();
    let demod: Vec<f64> = (first..=last)
        .zip(&times)
        .map(|(k, t)| (z[k] * C64::from_polar(1.0, -carrier * t)).arg())
        .collect();
    let mut phase = unwrap(&demod);
    for (p, t) in phase.iter_mut().zip(&times) {
        *p += carrier * t;
    }
    let mid = times
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let shift = -2.0 * PI * (phase[mid] / (2.0 * PI)).round();
    for p in &mut phase {
        *p += shift;
    }
    let weights = (first..=last).map(|k| z[k].norm_sqr()).collect();
    Ok(PhaseSeries { times, phase, weights })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub kind: PhaseKind,
    /// Model parameters in the order of [`PhaseModel::params`].
    pub params: Vec<f64>,
    /// Fitted constant phase.
    pub offset: f64,
    /// Envelope-weighted rms phase residual, rad.
    pub rms_error: f64,
}

impl FitResult {
    pub fn model(&self) -> PhaseModel {
        PhaseModel::from_params(self.kind, &self.params).expect("arity matches kind")
    }
}

fn basis(kind: PhaseKind, t: f64) -> [f64; 4] {
    match kind {
        PhaseKind::Linear => [1.0, t, t * t, 0.0],
        PhaseKind::Second => [1.0, t, t * t, t * t * t],
        PhaseKind::Roof => {
            let q = t * t;
            if t <= 0.0 {
                [1.0, t, q, 0.0]
            } else {
                [1.0, t, 0.0, q]
            }
        }
    }
}

/// Weighted least-squares fit of a phase model plus a constant.
pub fn fit_series(series: &PhaseSeries, kind: PhaseKind) -> Result<FitResult> {
    let cols = kind.arity() + 1;
    let m = series.times.len();
    let mut x = DMatrix::<f64>::zeros(m, cols);
    let mut y = DVector::<f64>::zeros(m);
    for (i, ((&t, &p), &w)) in series.times.iter().zip(&series.phase).zip(&series.weights).enumerate() {
        let sw = w.sqrt();
        let b = basis(kind, t);
        for j in 0..cols {
            x[(i, j)] = sw * b[j];
        }
        y[i] = sw * p;
    }
    let svd = x.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > 1e-12 * smax) {
        return Err(Error::param("window", format!("rank-deficient {kind:?} design")));
    }
    let coef = svd
        .solve(&y, 0.0)
        .map_err(|e| Error::param("window", e.to_string()))?;
    let resid = &x * &coef - &y;
    let wsum: f64 = series.weights.iter().sum();
    Ok(FitResult {
        kind,
        params: coef.iter().skip(1).copied().collect(),
        offset: coef[0],
        rms_error: (resid.norm_squared() / wsum).sqrt(),
    })
}

pub fn regress(sample: &PhaseSample, kind: PhaseKind) -> Result<FitResult> {
    fit_series(&extract_phase(sample)?, kind)
}

/// Picks the simplest model unless a richer one lowers the rms by both the
/// relative and the absolute margin. Returns all three fits.
pub fn select_model(series: &PhaseSeries) -> Result<(PhaseKind, [FitResult; 3])> {
    let linear = fit_series(series, PhaseKind::Linear)?;
    let second = fit_series(series, PhaseKind::Second)?;
    let roof = fit_series(series, PhaseKind::Roof)?;
    let best_rich = if roof.rms_error < second.rms_error { &roof } else { &second };
    let kind = if best_rich.rms_error <= MODEL_GAIN * linear.rms_error
        && linear.rms_error - best_rich.rms_error >= MODEL_FLOOR
    {
        best_rich.kind
    } else {
        PhaseKind::Linear
    };
    Ok((kind, [linear, second, roof]))
}

pub fn classify(sample: &PhaseSample) -> Result<PhaseKind> {
    Ok(select_model(&extract_phase(sample)?)?.0)
}

/// Classifies and fits in one pass.
pub fn analyze(sample: &PhaseSample) -> Result<FitResult> {
    let (kind, fits) = select_model(&extract_phase(sample)?)?;
    Ok(fits[kind.index()].clone())
}

/// Ranges for the synthetic evaluation suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseSuiteConfig {
    pub seed: u64,
    pub samples_per_kind: usize,
    pub tau: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub samples: usize,
    pub carrier: [f64; 2],
    pub chirp: [f64; 2],
    pub cubic_magnitude: [f64; 2],
    pub roof_min_gap: f64,
    pub random_offset: bool,
    pub noise: f64,
}

const PINNED_SUITE: &str = include_str!("../config/phase_suite.json");

impl PhaseSuiteConfig {
    /// The checked-in suite definition.
    pub fn pinned() -> Self {
        serde_json::from_str(PINNED_SUITE).expect("pinned phase suite config parses")
    }

    pub fn grid(&self) -> SampleGrid {
        SampleGrid {
            tau: self.tau,
            t_start: self.t_start,
            t_end: self.t_end,
            samples: self.samples,
        }
    }

    /// Width of each parameter's generation range, used for normalization.
    pub fn param_widths(&self, kind: PhaseKind) -> Vec<f64> {
        let a1 = self.carrier[1] - self.carrier[0];
        let a2 = self.chirp[1] - self.chirp[0];
        match kind {
            PhaseKind::Linear => vec![a1, a2],
            PhaseKind::Second => vec![a1, a2, 2.0 * self.cubic_magnitude[1]],
            PhaseKind::Roof => vec![a1, a2, a2],
        }
    }

    pub fn draw<R: Rng + ?Sized>(&self, kind: PhaseKind, rng: &mut R) -> PhaseModel {
        let a1 = rng.gen_range(self.carrier[0]..=self.carrier[1]);
        let mut chirp = || rng.gen_range(self.chirp[0]..=self.chirp[1]);
        match kind {
            PhaseKind::Linear => PhaseModel::Linear { a1, a2: chirp() },
            PhaseKind::Second => {
                let a2 = chirp();
                let mag = rng.gen_range(self.cubic_magnitude[0]..=self.cubic_magnitude[1]);
                let a3 = if rng.gen_bool(0.5) { mag } else { -mag };
                PhaseModel::Second { a1, a2, a3 }
            }
            PhaseKind::Roof => loop {
                let before = rng.gen_range(self.chirp[0]..=self.chirp[1]);
                let after = rng.gen_range(self.chirp[0]..=self.chirp[1]);
                if (after - before).abs() >= self.roof_min_gap {
                    break PhaseModel::Roof { a1, before, after };
                }
            },
        }
    }

    /// Generates the suite: `samples_per_kind` of each kind, interleaved.
    pub fn generate(&self) -> Result<Vec<PhaseSample>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let grid = self.grid();
        let mut out = Vec::with_capacity(3 * self.samples_per_kind);
        for _ in 0..self.samples_per_kind {
            for kind in PhaseKind::ALL {
                let model = self.draw(kind, &mut rng);
                let offset = if self.random_offset { rng.gen_range(-PI..PI) } else { 0.0 };
                out.push(generate_sample(model, &grid, offset, self.noise, &mut rng)?);
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    /// `confusion[true][predicted]`, kinds ordered Linear, Second, Roof.
    pub confusion: [[usize; 3]; 3],
    pub accuracy: f64,
    /// Rms of range-normalized parameter errors over every sample and
    /// parameter, with predictions mapped onto the true kind.
    pub param_rms: f64,
    /// Rms per true kind and parameter position.
    pub per_parameter_rms: Vec<Vec<f64>>,
    pub failures: usize,
}

/// Classifies and regresses every sample of the suite in parallel.
pub fn evaluate_suite(config: &PhaseSuiteConfig) -> Result<SuiteReport> {
    let samples = config.generate()?;
    let results: Vec<Option<FitResult>> = samples.par_iter().map(|s| analyze(s).ok()).collect();
    let mut confusion = [[0usize; 3]; 3];
    let mut sq = vec![vec![0.0; 3]; 3];
    let mut counts = [0usize; 3];
    let (mut total_sq, mut total_n) = (0.0, 0usize);
    let mut failures = 0;
    for (s, r) in samples.iter().zip(&results) {
        let truth = s.truth.expect("synthetic samples carry their truth");
        let kind = truth.kind();
        let widths = config.param_widths(kind);
        counts[kind.index()] += 1;
        let (pred_kind, pred) = match r {
            Some(fit) => (fit.kind, fit.model().as_kind(kind).params()),
            None => {
                failures += 1;
                (PhaseKind::Linear, vec![f64::NAN; kind.arity()])
            }
        };
        confusion[kind.index()][pred_kind.index()] += 1;
        for (j, ((p, t), w)) in pred.iter().zip(truth.params()).zip(&widths).enumerate() {
            let e = ((p - t) / w).powi(2);
            let e = if e.is_finite() { e } else { 1.0 };
            sq[kind.index()][j] += e;
            total_sq += e;
            total_n += 1;
        }
    }
    let correct: usize = (0..3).map(|i| confusion[i][i]).sum();
    let per_parameter_rms = PhaseKind::ALL
        .iter()
        .map(|k| {
            sq[k.index()][..k.arity()]
                .iter()
                .map(|s| (s / counts[k.index()].max(1) as f64).sqrt())
                .collect()
        })
        .collect();
    Ok(SuiteReport {
        confusion,
        accuracy: correct as f64 / samples.len() as f64,
        param_rms: (total_sq / total_n.max(1) as f64).sqrt(),
        per_parameter_rms,
        failures,
    })
}

/// Temporal chirp rate `2 a2` of a linearly chirped field.
pub fn fitted_chirp_rate(sample: &PhaseSample) -> Result<f64> {
    Ok(2.0 * regress(sample, PhaseKind::Linear)?.params[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn grid() -> SampleGrid {
        PhaseSuiteConfig::pinned().grid()
    }

    fn sample(model: PhaseModel, offset: f64) -> PhaseSample {
        generate_sample(model, &grid(), offset, 0.0, &mut ChaCha8Rng::seed_from_u64(0)).unwrap()
    }

    #[test]
    fn arity_is_checked() {
        assert!(PhaseModel::from_params(PhaseKind::Second, &[1.0, 2.0]).is_err());
        assert!(PhaseModel::from_params(PhaseKind::Linear, &[1.0, 2.0]).is_ok());
    }

    #[test]
    fn degenerate_models_coincide() {
        let lin = PhaseModel::Linear { a1: 60.0, a2: 1.5 };
        let sec = PhaseModel::Second { a1: 60.0, a2: 1.5, a3: 0.0 };
        let roof = PhaseModel::Roof {
            a1: 60.0,
            before: 1.5,
            after: 1.5,
        };
        assert_eq!(sample(lin, 0.0).values, sample(sec, 0.0).values);
        assert_eq!(sample(lin, 0.0).values, sample(roof, 0.0).values);
        assert_eq!(classify(&sample(roof, 0.0)).unwrap(), PhaseKind::Linear);
        let pure = sample(PhaseModel::Linear { a1: 55.0, a2: 0.0 }, 0.0);
        for (k, v) in pure.values.iter().enumerate() {
            let t = pure.time(k);
            assert_relative_eq!(*v, (-t * t / 2.0).exp() * (55.0 * t).cos(), epsilon = 1e-15);
        }
    }

    #[test]
    fn linear_phase_recovered_pointwise() {
        let model = PhaseModel::Linear { a1: 62.0, a2: -2.5 };
        let series = extract_phase(&sample(model, 0.0)).unwrap();
        for (t, p) in series.times.iter().zip(&series.phase) {
            assert!((p - model.phase(*t)).abs() < 1e-4);
        }
        for w in series.phase.windows(2) {
            assert!((w[1] - w[0]).abs() < PI);
        }
    }

    #[test]
    fn constant_offset_shifts_phase() {
        let model = PhaseModel::Second { a1: 58.0, a2: 0.7, a3: -0.4 };
        let a = extract_phase(&sample(model, 0.0)).unwrap();
        let b = extract_phase(&sample(model, PI / 3.0)).unwrap();
        for (x, y) in a.phase.iter().zip(&b.phase) {
            assert!((y - x - PI / 3.0).abs() < 1e-6);
        }
    }

    #[test]
    fn time_reversal_flips_phase() {
        let model = PhaseModel::Linear { a1: 60.0, a2: 2.0 };
        let s = sample(model, 0.0);
        let mut rev = s.clone();
        rev.values.reverse();
        let a = extract_phase(&s).unwrap();
        let b = extract_phase(&rev).unwrap();
        let n = a.phase.len();
        assert_eq!(n, b.phase.len());
        for k in 0..n {
            assert!((b.phase[k] + a.phase[n - 1 - k]).abs() < 1e-6);
        }
    }

    #[test]
    fn undersampled_is_rejected() {
        let coarse = SampleGrid {
            samples: 150,
            ..grid()
        };
        let s = generate_sample(
            PhaseModel::Linear { a1: 60.0, a2: 0.0 },
            &coarse,
            0.0,
            0.0,
            &mut ChaCha8Rng::seed_from_u64(0),
        )
        .unwrap();
        assert!(extract_phase(&s).is_err());
    }

    #[test]
    fn noiseless_linear_regression() {
        let model = PhaseModel::Linear { a1: 51.3, a2: 3.2 };
        let fit = regress(&sample(model, 1.1), PhaseKind::Linear).unwrap();
        assert_relative_eq!(fit.params[0], 51.3, max_relative = 1e-6);
        assert_relative_eq!(fit.params[1], 3.2, max_relative = 1e-6);
        assert_relative_eq!(fit.offset, 1.1, epsilon = 1e-6);
    }

    #[test]
    fn roundtrip_kinds() {
        let cases = [
            PhaseModel::Linear { a1: 57.0, a2: -1.0 },
            PhaseModel::Second { a1: 66.0, a2: 2.0, a3: 0.3 },
            PhaseModel::Roof {
                a1: 52.0,
                before: 2.0,
                after: -2.0,
            },
        ];
        for m in cases {
            assert_eq!(classify(&sample(m, 0.4)).unwrap(), m.kind());
        }
        let tiny = PhaseModel::Second { a1: 60.0, a2: 1.0, a3: 1e-6 };
        assert_eq!(classify(&sample(tiny, 0.0)).unwrap(), PhaseKind::Linear);
    }

    #[test]
    fn amplitude_invariance() {
        let m = PhaseModel::Roof {
            a1: 61.0,
            before: -3.0,
            after: 1.0,
        };
        let s = sample(m, 0.2);
        let a = analyze(&s).unwrap();
        let b = analyze(&s.scaled(37.5)).unwrap();
        assert_eq!(a.kind, b.kind);
        for (x, y) in a.params.iter().zip(&b.params) {
            assert_relative_eq!(x, y, max_relative = 1e-9);
        }
    }

    #[test]
    fn rms_falls_with_noise() {
        let m = PhaseModel::Second { a1: 59.0, a2: -1.2, a3: 0.6 };
        let mut prev = f64::INFINITY;
        for noise in [1e-2, 1e-3, 0.0] {
            let s = generate_sample(m, &grid(), 0.0, noise, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
            let r = regress(&s, PhaseKind::Second).unwrap().rms_error;
            assert!(r < prev);
            prev = r;
        }
    }

    #[test]
    fn as_kind_mappings() {
        let r = PhaseModel::Roof {
            a1: 1.0,
            before: 2.0,
            after: 4.0,
        };
        assert_eq!(r.as_kind(PhaseKind::Linear), PhaseModel::Linear { a1: 1.0, a2: 3.0 });
        let l = PhaseModel::Linear { a1: 1.0, a2: 2.0 };
        assert_eq!(
            l.as_kind(PhaseKind::Roof),
            PhaseModel::Roof {
                a1: 1.0,
                before: 2.0,
                after: 2.0
            }
        );
    }

    #[test]
    fn pinned_suite_is_deterministic() {
        let cfg = PhaseSuiteConfig {
            samples_per_kind: 5,
            ..PhaseSuiteConfig::pinned()
        };
        assert_eq!(cfg.generate().unwrap(), cfg.generate().unwrap());
        let report = evaluate_suite(&cfg).unwrap();
        assert_eq!(report.confusion.iter().flatten().sum::<usize>(), 15);
    }
}
