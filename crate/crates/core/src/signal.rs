//! Sampled-signal helpers shared by the time–frequency and phase tools.

use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

/// Analytic signal of a real series: negative frequencies removed, positive
/// ones doubled, so that `Re(z) = x`.
pub fn analytic_signal(samples: &[f64]) -> Vec<C64> {
    let n = samples.len();
    let mut buf: Vec<C64> = samples.iter().map(|&x| C64::new(x, 0.0)).collect();
    if n == 0 {
        return buf;
    }
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    let half = n / 2;
    for (k, v) in buf.iter_mut().enumerate() {
        let gain = if k == 0 || (n % 2 == 0 && k == half) {
            1.0
        } else if k < (n + 1) / 2 {
            2.0
        } else {
            0.0
        };
        *v *= gain / n as f64;
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    buf
}

/// Fraction of spectral power above one eighth of the sample rate.
pub fn high_band_fraction(samples: &[f64]) -> f64 {
    let n = samples.len();
    if n < 8 {
        return 0.0;
    }
    let mut buf: Vec<C64> = samples.iter().map(|&x| C64::new(x, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let cut = n / 8;
    let (mut high, mut total) = (0.0, 0.0);
    for (k, v) in buf.iter().enumerate() {
        let bin = k.min(n - k);
        let p = v.norm_sqr();
        total += p;
        if bin > cut {
            high += p;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        high / total
    }
}

/// Removes `2π` jumps between consecutive phases.
pub fn unwrap(phases: &[f64]) -> Vec<f64> {
    use std::f64::consts::{PI, TAU};
    let mut out = Vec::with_capacity(phases.len());
    let mut shift = 0.0;
    let mut prev: Option<f64> = None;
    for &p in phases {
        if let Some(q) = prev {
            let d = p - q;
            if d > PI {
                shift -= TAU * ((d + PI) / TAU).floor();
            } else if d < -PI {
                shift += TAU * ((-d + PI) / TAU).floor();
            }
        }
        out.push(p + shift);
        prev = Some(p);
    }
    out
}
