//! Field-interaction Hamiltonians (hbar = 1).

use nalgebra::SMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::pulse::{CarsPulses, Envelope};

pub type Mat<const N: usize> = SMatrix<C64, N, N>;
pub type Mat2 = Mat<2>;
pub type Mat3 = Mat<3>;
pub type Mat4 = Mat<4>;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Anything that yields a Hamiltonian at time `t`.
pub trait Hamiltonian<const N: usize> {
    fn at(&self, t: f64) -> Mat<N>;
}

impl<const N: usize, F: Fn(f64) -> Mat<N>> Hamiltonian<N> for F {
    fn at(&self, t: f64) -> Mat<N> {
        self(t)
    }
}

/// Detunings of the four-level CARS system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarsDetunings {
    pub delta_s: f64,
    pub delta_as: f64,
    pub two_photon: f64,
}

/// Four-level CARS Hamiltonian from instantaneous envelopes
/// `[Ωp, Ωs, Ωpr, Ωas]` and chirp rates at offset `dt` from the center.
pub fn four_level_matrix(
    env: [f64; 4],
    alpha_p: f64,
    alpha_s: f64,
    dt: f64,
    d: &CarsDetunings,
) -> Mat4 {
    let [p, s, pr, a] = env;
    let h = 0.5;
    Mat4::new(
        re(alpha_p * dt),
        re(0.0),
        re(h * p),
        re(h * a),
        re(0.0),
        re(alpha_s * dt - d.two_photon),
        re(h * s),
        re(h * pr),
        re(h * p),
        re(h * s),
        re(-d.delta_s),
        re(0.0),
        re(h * a),
        re(h * pr),
        re(0.0),
        re(alpha_p * dt - d.delta_as),
    )
}

/// Exact four-level CARS model driven by a chirped pulse set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourLevelCarsParams {
    pub pulses: CarsPulses,
    pub detunings: CarsDetunings,
}

impl FourLevelCarsParams {
    pub fn new(pulses: CarsPulses, detunings: CarsDetunings) -> Result<Self> {
        if pulses.anti_stokes.peak_amplitude != 0.0 {
            return Err(Error::param(
                "anti_stokes",
                "initial anti-Stokes amplitude must be zero",
            ));
        }
        for dt in [-1.0, 0.0, 1.0] {
            let p = pulses.pump.chirp_law.rate(dt);
            let s = pulses.stokes.chirp_law.rate(dt);
            let pr = pulses.probe.chirp_law.rate(dt);
            if (pr - (s - p)).abs() > 1e-15 * (s.abs() + p.abs()).max(1e-300) {
                return Err(Error::param(
                    "probe",
                    "probe chirp must equal Stokes chirp minus pump chirp",
                ));
            }
        }
        Ok(Self { pulses, detunings })
    }

    pub fn center_time(&self) -> f64 {
        self.pulses.center_time()
    }

    pub fn envelopes(&self, t: f64) -> [f64; 4] {
        let p = &self.pulses;
        [
            p.pump.envelope_at(t),
            p.stokes.envelope_at(t),
            p.probe.envelope_at(t),
            p.anti_stokes.envelope_at(t),
        ]
    }

    /// `(Ω1, Ω2, Ω3)` of the adiabatically eliminated model.
    pub fn omega_terms(&self, t: f64) -> (f64, f64, f64) {
        omega_terms(self.envelopes(t), &self.detunings)
    }
}

impl Hamiltonian<4> for FourLevelCarsParams {
    fn at(&self, t: f64) -> Mat4 {
        h_four_level(self, t)
    }
}

pub fn h_four_level(params: &FourLevelCarsParams, t: f64) -> Mat4 {
    let dt = t - params.center_time();
    let ap = params.pulses.pump.chirp_law.rate(dt);
    let a_s = params.pulses.stokes.chirp_law.rate(dt);
    four_level_matrix(params.envelopes(t), ap, a_s, dt, &params.detunings)
}

pub(crate) fn omega_terms(env: [f64; 4], d: &CarsDetunings) -> (f64, f64, f64) {
    let [p, s, pr, a] = env;
    let (ds, das) = (4.0 * d.delta_s, 4.0 * d.delta_as);
    (
        p * p / ds + a * a / das,
        s * s / ds + pr * pr / das,
        p * s / ds + pr * a / das,
    )
}

/// Residual `|Ω1 - Ω2|` of the AC Stark shifts.
pub fn ac_stark_balance(params: &FourLevelCarsParams, t: f64) -> f64 {
    let (o1, o2, _) = params.omega_terms(t);
    (o1 - o2).abs()
}

/// Two-level model obtained by eliminating states 3 and 4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperEffectiveParams {
    pub cars: FourLevelCarsParams,
}

impl SuperEffectiveParams {
    pub fn new(cars: FourLevelCarsParams) -> Self {
        Self { cars }
    }

    pub fn center_time(&self) -> f64 {
        self.cars.center_time()
    }

    pub fn two_photon(&self) -> f64 {
        self.cars.detunings.two_photon
    }

    pub fn omega_terms(&self, t: f64) -> (f64, f64, f64) {
        self.cars.omega_terms(t)
    }

    /// `(αp, αs)` at time `t`.
    pub fn rates(&self, t: f64) -> (f64, f64) {
        let dt = t - self.center_time();
        let p = &self.cars.pulses;
        (p.pump.chirp_law.rate(dt), p.stokes.chirp_law.rate(dt))
    }

    /// Probe chirp `αpr = αs - αp`.
    pub fn probe_rate(&self, t: f64) -> f64 {
        let (ap, a_s) = self.rates(t);
        a_s - ap
    }

    /// Analytic time derivative of `Ω3`.
    pub fn omega3_derivative(&self, t: f64) -> f64 {
        let p = &self.cars.pulses;
        let d = &self.cars.detunings;
        let env = self.cars.envelopes(t);
        let slope = |pulse: &crate::pulse::ChirpedPulse, e: f64| {
            let tau = pulse.tau();
            -(t - pulse.center_time) / (tau * tau) * e
        };
        let dp = slope(&p.pump, env[0]);
        let ds = slope(&p.stokes, env[1]);
        let dpr = slope(&p.probe, env[2]);
        let da = slope(&p.anti_stokes, env[3]);
        (dp * env[1] + env[0] * ds) / (4.0 * d.delta_s)
            + (dpr * env[3] + env[2] * da) / (4.0 * d.delta_as)
    }

    /// Diagonal detuning `δ - (αs - αp)(t - tc) + Ω1 - Ω2` (twice `H11`).
    pub fn diagonal(&self, t: f64) -> f64 {
        let (o1, o2, _) = self.omega_terms(t);
        let dt = t - self.center_time();
        self.two_photon() - self.probe_rate(t) * dt + o1 - o2
    }
}

impl Hamiltonian<2> for SuperEffectiveParams {
    fn at(&self, t: f64) -> Mat2 {
        h_super_effective(self, t)
    }
}

pub fn h_super_effective(params: &SuperEffectiveParams, t: f64) -> Mat2 {
    let (_, _, o3) = params.omega_terms(t);
    let d = 0.5 * params.diagonal(t);
    Mat2::new(re(d), re(o3), re(o3), re(-d))
}

/// Three-level STIRAP system with optional linear chirps.
#[derive(Debug, Clone, PartialEq)]
pub struct StirapParams {
    pub pump: Envelope,
    pub stokes: Envelope,
    pub t_p: f64,
    pub t_s: f64,
    /// One-photon detuning of state 2.
    pub detuning: f64,
    /// Two-photon detuning of state 3.
    pub two_photon: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl StirapParams {
    /// Counter-intuitive Gaussian pair: Stokes at `-sep/2`, pump at `+sep/2`.
    pub fn gaussian_pair(omega0: f64, width: f64, separation: f64, detuning: f64) -> Self {
        let t_p = 0.5 * separation;
        Self {
            pump: Envelope::gaussian(omega0, t_p, width),
            stokes: Envelope::gaussian(omega0, -t_p, width),
            t_p,
            t_s: -t_p,
            detuning,
            two_photon: 0.0,
            alpha: 0.0,
            beta: 0.0,
        }
    }

    pub fn rabi(&self, t: f64) -> (f64, f64) {
        (self.pump.at(t), self.stokes.at(t))
    }
}

impl Hamiltonian<3> for StirapParams {
    fn at(&self, t: f64) -> Mat3 {
        h_stirap3(self, t)
    }
}

pub fn h_stirap3(params: &StirapParams, t: f64) -> Mat3 {
    let (p, s) = params.rabi(t);
    let z = re(0.0);
    Mat3::new(
        re(params.alpha * (t - params.t_p)),
        re(0.5 * p),
        z,
        re(0.5 * p),
        re(params.detuning),
        re(0.5 * s),
        z,
        re(0.5 * s),
        re(params.two_photon + params.beta * (t - params.t_s)),
    )
}

/// STIRAP into a pair of nearly degenerate final states split by `splitting`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChirpedStirap4Params {
    pub stirap: StirapParams,
    pub splitting: f64,
}

impl Hamiltonian<4> for ChirpedStirap4Params {
    fn at(&self, t: f64) -> Mat4 {
        h_stirap4(self, t)
    }
}

pub fn h_stirap4(params: &ChirpedStirap4Params, t: f64) -> Mat4 {
    let st = &params.stirap;
    let (p, s) = st.rabi(t);
    let z = re(0.0);
    let d3 = st.two_photon + st.beta * (t - st.t_s);
    Mat4::new(
        re(st.alpha * (t - st.t_p)),
        re(0.5 * p),
        z,
        z,
        re(0.5 * p),
        re(st.detuning),
        re(0.5 * s),
        re(0.5 * s),
        z,
        re(0.5 * s),
        re(d3),
        z,
        z,
        re(0.5 * s),
        z,
        re(d3 + params.splitting),
    )
}
