//! Dressed-state frames and adiabaticity diagnostics.

use nalgebra::Matrix3;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hamiltonian::{Mat2, StirapParams, SuperEffectiveParams};

/// Detuning `-δ + αpr (t - tc)` that sets the dressed splitting.
fn sweep(params: &SuperEffectiveParams, t: f64) -> f64 {
    -params.two_photon() + params.probe_rate(t) * (t - params.center_time())
}

/// Non-adiabatic coupling `θ̇(t)` of the two-level dressed frame.
pub fn nonadiabatic_parameter(params: &SuperEffectiveParams, t: f64) -> Result<f64> {
    let x = sweep(params, t);
    let (_, _, o3) = params.omega_terms(t);
    let denom = x * x + 4.0 * o3 * o3;
    if !(denom > 1e-30) {
        return Err(Error::SingularDenominator {
            field: "theta_dot",
            time: t,
            value: denom,
        });
    }
    let apr = params.probe_rate(t);
    Ok((x * params.omega3_derivative(t) - 2.0 * o3 * apr) / denom)
}

/// Mixing angle with `tan 2θ = 2Ω3 / (δ - αpr (t - tc))`, continuous in `t`.
pub fn mixing_angle(params: &SuperEffectiveParams, t: f64) -> f64 {
    let (_, _, o3) = params.omega_terms(t);
    0.5 * (2.0 * o3).atan2(-sweep(params, t))
}

/// Dressed splitting `sqrt((-δ + αpr (t - tc))^2 + 4 Ω3^2)`.
pub fn dressed_gap(params: &SuperEffectiveParams, t: f64) -> f64 {
    let (_, _, o3) = params.omega_terms(t);
    sweep(params, t).hypot(2.0 * o3)
}

pub fn dressed_hamiltonian_2(params: &SuperEffectiveParams, t: f64) -> Result<Mat2> {
    let gap = dressed_gap(params, t);
    let theta_dot = if gap == 0.0 {
        0.0
    } else {
        nonadiabatic_parameter(params, t)?
    };
    Ok(Mat2::new(
        C64::new(-0.5 * gap, 0.0),
        C64::new(0.0, -0.5 * theta_dot),
        C64::new(0.0, 0.5 * theta_dot),
        C64::new(0.5 * gap, 0.0),
    ))
}

/// Bare energies, dressed energies and `θ̇` sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DressedDiagnostics2 {
    pub times: Vec<f64>,
    pub bare: Vec<(f64, f64)>,
    pub dressed: Vec<(f64, f64)>,
    pub theta_dot: Vec<f64>,
}

impl DressedDiagnostics2 {
    pub fn sample(params: &SuperEffectiveParams, times: &[f64]) -> Result<Self> {
        let mut out = Self {
            times: times.to_vec(),
            bare: Vec::with_capacity(times.len()),
            dressed: Vec::with_capacity(times.len()),
            theta_dot: Vec::with_capacity(times.len()),
        };
        for &t in times {
            let e = 0.5 * params.diagonal(t);
            let gap = dressed_gap(params, t);
            out.bare.push((e, -e));
            out.dressed.push((-0.5 * gap, 0.5 * gap));
            out.theta_dot.push(nonadiabatic_parameter(params, t)?);
        }
        Ok(out)
    }

    /// `|θ̇| / (λ2 - λ1)` at each sample.
    pub fn adiabaticity_ratio(&self) -> Vec<f64> {
        self.theta_dot
            .iter()
            .zip(&self.dressed)
            .map(|(td, (l1, l2))| td.abs() / (l2 - l1))
            .collect()
    }
}

/// Mixing angles, adiabatic energies and eigenvectors of the three-level
/// STIRAP Hamiltonian at two-photon resonance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stirap3Frame {
    pub theta: f64,
    pub phi: f64,
    pub omega_rms: f64,
    pub lambda_plus: f64,
    pub lambda_zero: f64,
    pub lambda_minus: f64,
    /// Dark state `cosθ ψ1 - sinθ ψ3`.
    pub dark: [f64; 3],
    pub plus: [f64; 3],
    pub minus: [f64; 3],
}

pub fn stirap_frame(params: &StirapParams, t: f64) -> Stirap3Frame {
    let (p, s) = params.rabi(t);
    let delta = params.detuning;
    let theta = p.atan2(s);
    let omega_rms = p.hypot(s);
    let phi = 0.5 * omega_rms.atan2(delta);
    let root = delta.hypot(omega_rms);
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    Stirap3Frame {
        theta,
        phi,
        omega_rms,
        lambda_plus: 0.5 * (delta + root),
        lambda_zero: 0.0,
        lambda_minus: 0.5 * (delta - root),
        dark: [ct, 0.0, -st],
        plus: [st * sp, cp, ct * sp],
        minus: [st * cp, -sp, ct * cp],
    }
}

/// Correction to the adiabatic-frame STIRAP Hamiltonian from a two-photon
/// detuning `delta`.
pub fn h_a1_correction(delta: f64, theta: f64, phi: f64) -> Matrix3<f64> {
    let (s2t, c2t) = (2.0 * theta).sin_cos();
    let (sp, cp) = phi.sin_cos();
    let s2p = (2.0 * phi).sin();
    Matrix3::new(
        c2t * sp * sp,
        -s2t * sp,
        0.5 * c2t * s2p,
        -s2t * sp,
        -c2t,
        -s2t * cp,
        0.5 * c2t * s2p,
        -s2t * cp,
        c2t * cp * cp,
    ) * (0.5 * delta)
}
