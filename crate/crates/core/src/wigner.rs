//! Wigner-Ville time–frequency distributions of chirped pulses.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pulse::ChirpedPulse;
use crate::signal::analytic_signal;

/// Closed-form distribution of a linearly chirped Gaussian, evaluated with the
/// chirp rate of the branch containing `t`.
pub fn wigner_closed_form(pulse: &ChirpedPulse, t: f64, omega: f64) -> f64 {
    let dt = t - pulse.center_time;
    let tau = pulse.tau();
    let e = pulse.reduced_peak();
    let ridge = pulse.carrier + pulse.rate_at(t) * dt;
    let tau2 = tau * tau;
    0.5 * tau * PI.sqrt()
        * e
        * e
        * (-dt * dt / tau2).exp()
        * ((-tau2 * (omega - ridge).powi(2)).exp() + (-tau2 * (omega + ridge).powi(2)).exp())
}

/// True where the closed form is only approximate: near the chirp switch of a
/// piecewise law.
pub fn closed_form_is_approximate(pulse: &ChirpedPulse, t: f64) -> bool {
    pulse.chirp_law.is_piecewise() && (t - pulse.center_time).abs() < 2.0 / pulse.carrier.abs()
}

/// Uniformly sampled analytic signal of a real field.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    pub start: f64,
    pub step: f64,
    pub values: Vec<C64>,
}

impl SampledField {
    /// Builds the analytic signal of `samples` by zeroing negative frequencies.
    /// `max_carrier` is the highest angular carrier frequency present.
    pub fn from_real(start: f64, step: f64, samples: &[f64], max_carrier: f64) -> Result<Self> {
        if !(step > 0.0) {
            return Err(Error::param("step", format!("must be positive, got {step}")));
        }
        let rate = 1.0 / step;
        let needed = 8.0 * max_carrier.abs() / (2.0 * PI);
        if rate < needed {
            return Err(Error::param(
                "step",
                format!("undersampled: sample rate {rate} is below 8x the carrier frequency ({needed})"),
            ));
        }
        let n = samples.len();
        if n < 2 {
            return Err(Error::param("samples", String::from("need at least two samples")));
        }
        Ok(Self {
            start,
            step,
            values: analytic_signal(samples),
        })
    }

    pub fn sample_pulse(pulse: &ChirpedPulse, start: f64, step: f64, count: usize) -> Result<Self> {
        let samples: Vec<f64> = (0..count)
            .map(|k| pulse.field_at(start + k as f64 * step))
            .collect();
        let end = start + count as f64 * step;
        let reach = (start - pulse.center_time).abs().max((end - pulse.center_time).abs());
        let top = pulse.carrier.abs() + pulse.rate_at(start).abs().max(pulse.rate_at(end).abs()) * reach;
        Self::from_real(start, step, &samples, top)
    }

    pub fn time(&self, index: usize) -> f64 {
        self.start + index as f64 * self.step
    }

    fn index_of(&self, t: f64) -> Result<usize> {
        let x = (t - self.start) / self.step;
        let k = x.round();
        if (x - k).abs() > 1e-6 || k < 0.0 || k as usize >= self.values.len() {
            return Err(Error::param("t", format!("{t} is not a sample time")));
        }
        Ok(k as usize)
    }

    /// Analytic-signal distribution `∫ z(t+s/2) z*(t-s/2) e^{-iωs} ds` at
    /// sample `k`, for several frequencies at once.
    fn analytic_wigner(&self, k: usize, omegas: &[f64]) -> Vec<f64> {
        let z = &self.values;
        let peak = z.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max);
        let reach = k.min(z.len() - 1 - k);
        let ds = 2.0 * self.step;
        let mut acc = vec![0.0; omegas.len()];
        for m in 0..=reach {
            let prod = z[k + m] * z[k - m].conj();
            if m > 0 && prod.norm() < 1e-12 * peak {
                break;
            }
            let s = m as f64 * ds;
            let w = if m == 0 { 1.0 } else { 2.0 };
            for (a, &om) in acc.iter_mut().zip(omegas) {
                // symmetric pair (m, -m) contributes 2 Re(prod e^{-iωs})
                *a += w * (prod * C64::from_polar(1.0, -om * s)).re;
            }
        }
        acc.iter().map(|a| a * ds).collect()
    }
}

/// Rotating-wave distribution of the real field at sample time `t`.
pub fn wigner_numeric(field: &SampledField, t: f64, omega: f64) -> Result<f64> {
    let k = field.index_of(t)?;
    let w = field.analytic_wigner(k, &[omega, -omega]);
    Ok(0.25 * (w[0] + w[1]))
}

/// Distribution sampled on a time × frequency grid, stored row-major by time.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub times: Vec<f64>,
    pub freqs: Vec<f64>,
    pub values: Vec<f64>,
}

impl WignerGrid {
    pub fn closed_form(pulse: &ChirpedPulse, times: &[f64], freqs: &[f64]) -> Self {
        let values = times
            .par_iter()
            .flat_map_iter(|&t| freqs.iter().map(move |&w| wigner_closed_form(pulse, t, w)))
            .collect();
        Self {
            times: times.to_vec(),
            freqs: freqs.to_vec(),
            values,
        }
    }

    pub fn numeric(field: &SampledField, times: &[f64], freqs: &[f64]) -> Result<Self> {
        let mut both = Vec::with_capacity(2 * freqs.len());
        both.extend_from_slice(freqs);
        both.extend(freqs.iter().map(|w| -w));
        let rows = times
            .par_iter()
            .map(|&t| {
                let k = field.index_of(t)?;
                let w = field.analytic_wigner(k, &both);
                let (pos, neg) = w.split_at(freqs.len());
                Ok(pos.iter().zip(neg).map(|(a, b)| 0.25 * (a + b)).collect::<Vec<_>>())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            times: times.to_vec(),
            freqs: freqs.to_vec(),
            values: rows.concat(),
        })
    }

    pub fn get(&self, ti: usize, fi: usize) -> f64 {
        self.values[ti * self.freqs.len() + fi]
    }

    /// Frequency of the maximum at each time.
    pub fn ridge(&self) -> Vec<f64> {
        let nf = self.freqs.len();
        self.values
            .chunks(nf)
            .map(|row| {
                let best = row
                    .iter()
                    .enumerate()
                    .fold((0, f64::NEG_INFINITY), |b, (i, &v)| if v > b.1 { (i, v) } else { b });
                self.freqs[best.0]
            })
            .collect()
    }

    /// Least-squares slope of the ridge against time.
    pub fn ridge_slope(&self) -> f64 {
        let ridge = self.ridge();
        let n = ridge.len() as f64;
        let mt = self.times.iter().sum::<f64>() / n;
        let mw = ridge.iter().sum::<f64>() / n;
        let (num, den) = self
            .times
            .iter()
            .zip(&ridge)
            .fold((0.0, 0.0), |(a, b), (t, w)| (a + (t - mt) * (w - mw), b + (t - mt).powi(2)));
        num / den
    }

    /// Writes `t,omega,w` rows with a header.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "omega", "w"])?;
        for (ti, t) in self.times.iter().enumerate() {
            for (fi, f) in self.freqs.iter().enumerate() {
                w.serialize((t, f, self.get(ti, fi)))?;
            }
        }
        w.flush()?;
        Ok(())
    }
}
