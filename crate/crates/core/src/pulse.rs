//! Chirped Gaussian pulses, pulse trains, chirp laws and Rabi envelopes.
//!
//! Conventions: the field of a single pulse is
//! `E(t) = E0 (1 + a^2)^(-1/4) exp(-(t-tc)^2 / 2 tau^2) cos(w (t-tc) + alpha/2 (t-tc)^2)`
//! where `a = alpha' / tau0^2` is the dimensionless spectral chirp.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check_tau0(tau0: f64) -> Result<()> {
    if tau0 > 0.0 && tau0.is_finite() {
        Ok(())
    } else {
        Err(Error::param("tau0", format!("must be positive, got {tau0}")))
    }
}

/// Temporal chirp rate `alpha` from the spectral chirp `alpha'`.
pub fn spectral_to_temporal_chirp(alpha_prime: f64, tau0: f64) -> Result<f64> {
    check_tau0(tau0)?;
    let t4 = tau0.powi(4);
    Ok((alpha_prime / t4) / (1.0 + alpha_prime * alpha_prime / t4))
}

/// Duration `tau` of a pulse stretched by the spectral chirp `alpha'`.
pub fn chirped_duration(alpha_prime: f64, tau0: f64) -> Result<f64> {
    check_tau0(tau0)?;
    Ok(tau0 * (1.0 + alpha_prime * alpha_prime / tau0.powi(4)).sqrt())
}

/// Peak amplitude reduction `(1 + alpha'^2/tau0^4)^(-1/4)` from chirping.
pub fn chirp_reduction(alpha_prime: f64, tau0: f64) -> f64 {
    (1.0 + alpha_prime * alpha_prime / tau0.powi(4)).powf(-0.25)
}

/// Inverse of the chirp relations: `(tau0, alpha')` that give duration `tau`
/// and temporal rate `alpha`, using `alpha tau^2 = alpha' / tau0^2`.
pub fn from_duration_and_rate(tau: f64, alpha: f64) -> Result<(f64, f64)> {
    if !(tau > 0.0) {
        return Err(Error::param("tau", format!("must be positive, got {tau}")));
    }
    let ratio = alpha * tau * tau;
    let tau0 = tau / (1.0 + ratio * ratio).sqrt();
    Ok((tau0, ratio * tau0 * tau0))
}

/// Time dependence of a pulse's temporal chirp rate. Piecewise laws use the
/// first branch for `t <= tc`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChirpLaw {
    Constant(f64),
    CCarsPump(f64),
    CCarsStokes(f64),
    CCarsProbe(f64),
    Roof(f64, f64),
}

impl ChirpLaw {
    /// Rate at offset `dt = t - tc`.
    pub fn rate(&self, dt: f64) -> f64 {
        let before = dt <= 0.0;
        match *self {
            ChirpLaw::Constant(a) => a,
            ChirpLaw::CCarsPump(a_s) => {
                if before {
                    -a_s
                } else {
                    a_s
                }
            }
            ChirpLaw::CCarsStokes(a_s) => a_s,
            ChirpLaw::CCarsProbe(a_s) => {
                if before {
                    2.0 * a_s
                } else {
                    0.0
                }
            }
            ChirpLaw::Roof(b, a) => {
                if before {
                    b
                } else {
                    a
                }
            }
        }
    }

    pub fn is_piecewise(&self) -> bool {
        !matches!(self, ChirpLaw::Constant(_) | ChirpLaw::CCarsStokes(_))
    }
}

/// How the pump, Stokes and probe chirps are arranged for a CARS run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChirpScheme {
    /// Pump chirp flips sign at the center, probe carries the difference.
    CCars,
    /// Pump chirp is opposite to the Stokes chirp for the whole pulse.
    Opposite,
    /// No chirp at all.
    TransformLimited,
}

impl ChirpScheme {
    /// Chirp laws `(pump, stokes, probe)` for a Stokes rate `alpha_s`.
    pub fn laws(self, alpha_s: f64) -> (ChirpLaw, ChirpLaw, ChirpLaw) {
        match self {
            ChirpScheme::CCars => (
                ChirpLaw::CCarsPump(alpha_s),
                ChirpLaw::CCarsStokes(alpha_s),
                ChirpLaw::CCarsProbe(alpha_s),
            ),
            ChirpScheme::Opposite => (
                ChirpLaw::Constant(-alpha_s),
                ChirpLaw::Constant(alpha_s),
                ChirpLaw::Constant(2.0 * alpha_s),
            ),
            ChirpScheme::TransformLimited => (
                ChirpLaw::Constant(0.0),
                ChirpLaw::Constant(0.0),
                ChirpLaw::Constant(0.0),
            ),
        }
    }
}

/// A linearly (or piecewise linearly) chirped Gaussian pulse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChirpedPulse {
    /// Transform-limited peak Rabi frequency.
    pub peak_amplitude: f64,
    pub carrier: f64,
    pub tau0: f64,
    /// Spectral chirp `alpha'`; sets the duration and amplitude reduction.
    pub spectral_chirp: f64,
    pub center_time: f64,
    pub chirp_law: ChirpLaw,
}

impl ChirpedPulse {
    pub fn new(
        peak_amplitude: f64,
        carrier: f64,
        tau0: f64,
        spectral_chirp: f64,
        center_time: f64,
        chirp_law: ChirpLaw,
    ) -> Result<Self> {
        check_tau0(tau0)?;
        if !(peak_amplitude >= 0.0) {
            return Err(Error::param(
                "peak_amplitude",
                format!("must be non-negative, got {peak_amplitude}"),
            ));
        }
        Ok(Self {
            peak_amplitude,
            carrier,
            tau0,
            spectral_chirp,
            center_time,
            chirp_law,
        })
    }

    /// Pulse with a constant temporal chirp derived from `alpha'`.
    pub fn linear(
        peak_amplitude: f64,
        carrier: f64,
        tau0: f64,
        spectral_chirp: f64,
        center_time: f64,
    ) -> Result<Self> {
        let alpha = spectral_to_temporal_chirp(spectral_chirp, tau0)?;
        Self::new(
            peak_amplitude,
            carrier,
            tau0,
            spectral_chirp,
            center_time,
            ChirpLaw::Constant(alpha),
        )
    }

    pub fn tau(&self) -> f64 {
        self.tau0 * (1.0 + self.spectral_chirp.powi(2) / self.tau0.powi(4)).sqrt()
    }

    /// Magnitude of the temporal chirp implied by `alpha'`.
    pub fn temporal_chirp(&self) -> f64 {
        let t4 = self.tau0.powi(4);
        (self.spectral_chirp / t4) / (1.0 + self.spectral_chirp.powi(2) / t4)
    }

    /// Peak of the chirped envelope.
    pub fn reduced_peak(&self) -> f64 {
        self.peak_amplitude * chirp_reduction(self.spectral_chirp, self.tau0)
    }

    pub fn rate_at(&self, t: f64) -> f64 {
        self.chirp_law.rate(t - self.center_time)
    }

    pub fn envelope_at(&self, t: f64) -> f64 {
        let dt = t - self.center_time;
        let tau = self.tau();
        self.reduced_peak() * (-dt * dt / (2.0 * tau * tau)).exp()
    }

    pub fn instantaneous_phase(&self, t: f64) -> f64 {
        let dt = t - self.center_time;
        self.carrier * dt + 0.5 * self.chirp_law.rate(dt) * dt * dt
    }

    /// Real field value.
    pub fn field_at(&self, t: f64) -> f64 {
        self.envelope_at(t) * self.instantaneous_phase(t).cos()
    }

    pub fn shifted(&self, dt: f64) -> Self {
        Self {
            center_time: self.center_time + dt,
            ..*self
        }
    }
}

/// Three-pulse set driving a CARS run, with the anti-Stokes seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarsPulses {
    pub pump: ChirpedPulse,
    pub stokes: ChirpedPulse,
    pub probe: ChirpedPulse,
    pub anti_stokes: ChirpedPulse,
}

/// Carrier frequencies of the four CARS fields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Carriers {
    pub pump: f64,
    pub stokes: f64,
    pub probe: f64,
}

impl Carriers {
    pub fn anti_stokes(&self) -> f64 {
        self.pump - self.stokes + self.probe
    }
}

impl Default for Carriers {
    fn default() -> Self {
        Self {
            pump: 4.0,
            stokes: 3.0,
            probe: 4.0,
        }
    }
}

impl CarsPulses {
    /// Pulses with amplitudes `(Ωp0, Ωs0, Ωpr0)` sharing duration and chirp
    /// magnitude. `chirp_ratio` is `alpha_s' / tau0^2`.
    pub fn new(
        amplitudes: (f64, f64, f64),
        tau0: f64,
        chirp_ratio: f64,
        center_time: f64,
        scheme: ChirpScheme,
        carriers: Carriers,
    ) -> Result<Self> {
        let alpha_prime = chirp_ratio * tau0 * tau0;
        let alpha_s = match scheme {
            ChirpScheme::TransformLimited => 0.0,
            _ => spectral_to_temporal_chirp(alpha_prime, tau0)?,
        };
        let alpha_prime = if scheme == ChirpScheme::TransformLimited {
            0.0
        } else {
            alpha_prime
        };
        let (lp, ls, lpr) = scheme.laws(alpha_s);
        let (ap, as_, apr) = amplitudes;
        let pump = ChirpedPulse::new(ap, carriers.pump, tau0, alpha_prime, center_time, lp)?;
        let stokes = ChirpedPulse::new(as_, carriers.stokes, tau0, alpha_prime, center_time, ls)?;
        let probe = ChirpedPulse::new(apr, carriers.probe, tau0, alpha_prime, center_time, lpr)?;
        let anti_stokes = ChirpedPulse::new(
            0.0,
            carriers.anti_stokes(),
            tau0,
            alpha_prime,
            center_time,
            ChirpLaw::Constant(0.0),
        )?;
        Ok(Self {
            pump,
            stokes,
            probe,
            anti_stokes,
        })
    }

    /// Balanced set `Ωs0 = Ωpr0 = Ωp0/√2` whose super-effective coupling
    /// peaks at `omega3_0` for one-photon detuning `delta`.
    pub fn balanced(
        omega3_0: f64,
        delta: f64,
        tau0: f64,
        chirp_ratio: f64,
        center_time: f64,
        scheme: ChirpScheme,
        carriers: Carriers,
    ) -> Result<Self> {
        let omega_p0 = pump_for_effective_rabi(omega3_0, delta)?;
        let s = omega_p0 / std::f64::consts::SQRT_2;
        Self::new((omega_p0, s, s), tau0, chirp_ratio, center_time, scheme, carriers)
    }

    pub fn center_time(&self) -> f64 {
        self.pump.center_time
    }

    pub fn tau(&self) -> f64 {
        self.pump.tau().max(self.stokes.tau())
    }
}

/// Pump amplitude `Ωp0` giving `Ω3(0) = Ωp0^2 / (4√2 Δ)`.
pub fn pump_for_effective_rabi(omega3_0: f64, delta: f64) -> Result<f64> {
    if delta == 0.0 {
        return Err(Error::param("delta_one_photon", "must be non-zero"));
    }
    let v = omega3_0 * 4.0 * std::f64::consts::SQRT_2 * delta;
    if v < 0.0 {
        return Err(Error::param(
            "omega3_0",
            "sign must match the one-photon detuning",
        ));
    }
    Ok(v.sqrt())
}

/// Two-photon Rabi frequency `Ω3` at offset `dt` from the pulse center for
/// the balanced C-CARS amplitudes.
pub fn effective_rabi(
    omega_p0: f64,
    delta_one_photon: f64,
    alpha_p_prime: f64,
    alpha_s_prime: f64,
    tau0: f64,
    dt: f64,
) -> Result<f64> {
    check_tau0(tau0)?;
    if delta_one_photon == 0.0 {
        return Err(Error::param(
            "delta_one_photon",
            "adiabatic elimination needs a non-zero detuning",
        ));
    }
    let peak = omega_p0 * omega_p0 / (4.0 * std::f64::consts::SQRT_2 * delta_one_photon);
    let tp = chirped_duration(alpha_p_prime, tau0)?;
    let ts = chirped_duration(alpha_s_prime, tau0)?;
    let pref = chirp_reduction(alpha_p_prime, tau0) * chirp_reduction(alpha_s_prime, tau0);
    let rate = 0.5 / (tp * tp) + 0.5 / (ts * ts);
    Ok(peak * pref * (-rate * dt * dt).exp())
}

/// `N` copies of a base pulse separated by `period`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseTrain {
    pub base: ChirpedPulse,
    pub period: f64,
    pub count: usize,
}

impl PulseTrain {
    pub fn new(base: ChirpedPulse, period: f64, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::param("count", "a train needs at least one pulse"));
        }
        if !(period >= 0.0) {
            return Err(Error::param("period", format!("must be non-negative, got {period}")));
        }
        Ok(Self { base, period, count })
    }

    fn pulses(&self) -> impl Iterator<Item = ChirpedPulse> + '_ {
        (0..self.count).map(move |k| self.base.shifted(k as f64 * self.period))
    }

    pub fn field(&self, t: f64) -> f64 {
        self.pulses().map(|p| p.field_at(t)).sum()
    }

    pub fn envelope(&self, t: f64) -> f64 {
        self.pulses().map(|p| p.envelope_at(t)).sum()
    }

    /// Center of the pulse closest to `t`.
    pub fn nearest_center(&self, t: f64) -> f64 {
        nearest_center(self.base.center_time, self.period, self.count, t)
    }

    pub fn last_center(&self) -> f64 {
        self.base.center_time + (self.count - 1) as f64 * self.period
    }
}

pub(crate) fn nearest_center(first: f64, period: f64, count: usize, t: f64) -> f64 {
    if count <= 1 || period <= 0.0 {
        return first;
    }
    let k = ((t - first) / period).round().clamp(0.0, (count - 1) as f64);
    first + k * period
}

/// Gaussian Rabi envelope `peak exp(-(t - center)^2 / width^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianEnvelope {
    pub peak: f64,
    pub center: f64,
    pub width: f64,
}

impl GaussianEnvelope {
    pub fn at(&self, t: f64) -> f64 {
        let x = (t - self.center) / self.width;
        self.peak * (-x * x).exp()
    }
}

/// Sum of Gaussian envelopes.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Envelope(pub Vec<GaussianEnvelope>);

impl Envelope {
    pub fn gaussian(peak: f64, center: f64, width: f64) -> Self {
        Envelope(vec![GaussianEnvelope {
            peak,
            center,
            width,
        }])
    }

    pub fn at(&self, t: f64) -> f64 {
        self.0.iter().map(|g| g.at(t)).sum()
    }
}

/// Pump and Stokes envelopes for fractional STIRAP: the Stokes pulse has a
/// second component under the pump so that the mixing angle ends at `A`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FStirapEnvelopePair {
    pub omega0: f64,
    pub mixing_angle: f64,
    pub t_p: f64,
    pub tau: f64,
}

impl FStirapEnvelopePair {
    pub fn new(omega0: f64, mixing_angle: f64, t_p: f64, tau: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&mixing_angle) {
            return Err(Error::param(
                "mixing_angle",
                format!("must lie in [0, pi/2], got {mixing_angle}"),
            ));
        }
        if !(tau > 0.0) {
            return Err(Error::param("tau", "must be positive"));
        }
        Ok(Self {
            omega0,
            mixing_angle,
            t_p,
            tau,
        })
    }

    pub fn pump(&self) -> Envelope {
        Envelope::gaussian(self.omega0 * self.mixing_angle.sin(), self.t_p, self.tau)
    }

    pub fn stokes(&self) -> Envelope {
        Envelope(vec![
            GaussianEnvelope {
                peak: self.omega0,
                center: -self.t_p,
                width: self.tau,
            },
            GaussianEnvelope {
                peak: self.omega0 * self.mixing_angle.cos(),
                center: self.t_p,
                width: self.tau,
            },
        ])
    }

    /// `(Ωp(t), Ωs(t))`.
    pub fn envelopes(&self, t: f64) -> (f64, f64) {
        (self.pump().at(t), self.stokes().at(t))
    }

    /// Mixing angle `atan(Ωp/Ωs)` in a form that stays finite where both
    /// envelopes underflow.
    pub fn theta(&self, t: f64) -> f64 {
        let (s, c) = self.mixing_angle.sin_cos();
        let decay = (-4.0 * t * self.t_p / (self.tau * self.tau)).exp();
        s.atan2(decay + c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn chirp_conversion_examples() {
        assert_eq!(spectral_to_temporal_chirp(0.0, 10.0).unwrap(), 0.0);
        let a = spectral_to_temporal_chirp(-750.0, 10.0).unwrap();
        // -0.075 / 57.25
        assert_relative_eq!(a, -1.310_043_668_122_270_7e-3, max_relative = 1e-12);
        assert_eq!(chirped_duration(0.0, 10.0).unwrap(), 10.0);
        assert_relative_eq!(
            chirped_duration(-750.0, 10.0).unwrap(),
            75.663_729_752_107_78,
            max_relative = 1e-12
        );
        assert!(spectral_to_temporal_chirp(1.0, 0.0).is_err());
        assert!(chirped_duration(1.0, -1.0).is_err());
    }

    #[test]
    fn round_trip_identity() {
        for &tau0 in &[0.5, 4.66, 10.0, 25.0] {
            for &ratio in &[-10.0, -7.5, -1.0, -0.1, 0.3, 2.0] {
                let ap = ratio * tau0 * tau0;
                let a = spectral_to_temporal_chirp(ap, tau0).unwrap();
                let tau = chirped_duration(ap, tau0).unwrap();
                assert_relative_eq!(a * tau * tau, ap / (tau0 * tau0), max_relative = 1e-10);
                let (t0, ap2) = from_duration_and_rate(tau, a).unwrap();
                assert_relative_eq!(t0, tau0, max_relative = 1e-10);
                assert_relative_eq!(ap2, ap, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn envelope_examples() {
        let p = ChirpedPulse::linear(2.0, 1.0, 10.0, 0.0, 3.0).unwrap();
        assert_eq!(p.envelope_at(3.0), 2.0);
        let half = 10.0 * (2.0 * std::f64::consts::LN_2).sqrt();
        // the amplitude halves (squared envelope drops to a quarter)
        assert_relative_eq!(p.envelope_at(3.0 + half), 1.0, max_relative = 1e-12);
        assert_relative_eq!(p.envelope_at(3.0 - half), 1.0, max_relative = 1e-12);
        let q = ChirpedPulse::linear(1.0, 1.0, 10.0, -750.0, 0.0).unwrap();
        assert_relative_eq!(q.envelope_at(0.0), 57.25f64.powf(-0.25), max_relative = 1e-12);
        assert_relative_eq!(q.envelope_at(0.0), 0.363_543_285_030_844_6, max_relative = 1e-12);
    }

    #[test]
    fn squared_envelope_integral_is_chirp_independent() {
        let integral = |ap: f64| {
            let p = ChirpedPulse::linear(1.3, 0.0, 4.0, ap, 0.0).unwrap();
            let span = 12.0 * p.tau();
            let n = 40_000;
            let h = 2.0 * span / n as f64;
            (0..=n)
                .map(|k| {
                    let w = if k == 0 || k == n { 0.5 } else { 1.0 };
                    w * p.envelope_at(-span + k as f64 * h).powi(2)
                })
                .sum::<f64>()
                * h
        };
        let base = integral(0.0);
        for &ap in &[-160.0, -16.0, 5.0, 80.0] {
            assert_relative_eq!(integral(ap), base, max_relative = 1e-6);
        }
    }

    #[test]
    fn phase_examples() {
        let p = ChirpedPulse::new(1.0, 2.0, 5.0, 0.0, 1.0, ChirpLaw::Constant(0.3)).unwrap();
        assert_eq!(p.instantaneous_phase(1.0), 0.0);
        assert_relative_eq!(p.instantaneous_phase(2.0), 2.0 + 0.15, max_relative = 1e-15);
        let probe = ChirpedPulse::new(1.0, 4.0, 5.0, 0.0, 0.0, ChirpLaw::CCarsProbe(-0.01)).unwrap();
        assert_eq!(probe.instantaneous_phase(3.0), 12.0);
        assert_relative_eq!(probe.instantaneous_phase(-3.0), -12.0 - 0.09, max_relative = 1e-14);
    }

    #[test]
    fn ccars_law_structure() {
        let a_s = -1.3e-3;
        for i in -50..=50 {
            let dt = i as f64 * 0.7;
            let p = ChirpLaw::CCarsPump(a_s).rate(dt);
            let s = ChirpLaw::CCarsStokes(a_s).rate(dt);
            let pr = ChirpLaw::CCarsProbe(a_s).rate(dt);
            if dt <= 0.0 {
                assert_eq!(p, -s);
            } else {
                assert_eq!(p, s);
                assert_eq!(pr, 0.0);
            }
            assert_eq!(pr, s - p);
        }
        assert_eq!(ChirpLaw::CCarsPump(a_s).rate(0.0), -a_s);
    }

    #[test]
    fn effective_rabi_examples() {
        let v = effective_rabi(1.08, 1.0, 0.0, 0.0, 10.0, 0.0).unwrap();
        assert_relative_eq!(v, 0.206_192_337_393_997_26, max_relative = 1e-12);
        assert_eq!(effective_rabi(0.0, 1.0, 0.0, 0.0, 10.0, 0.0).unwrap(), 0.0);
        let chirped = effective_rabi(1.08, 1.0, -750.0, -750.0, 10.0, 0.0).unwrap();
        assert_relative_eq!(chirped, v / 57.25f64.sqrt(), max_relative = 1e-12);
        assert!(effective_rabi(1.0, 0.0, 0.0, 0.0, 10.0, 0.0).is_err());
        // Gaussian decay exp(-dt^2/tau^2)
        let tau = chirped_duration(-750.0, 10.0).unwrap();
        let at = effective_rabi(1.08, 1.0, -750.0, -750.0, 10.0, tau).unwrap();
        assert_relative_eq!(at, chirped * (-1.0f64).exp(), max_relative = 1e-12);
        assert_relative_eq!(pump_for_effective_rabi(v, 1.0).unwrap(), 1.08, max_relative = 1e-12);
    }

    #[test]
    fn train_examples() {
        let p = ChirpedPulse::linear(1.0, 3.0, 4.66, -21.7, 0.0).unwrap();
        let one = PulseTrain::new(p, 85.0, 1).unwrap();
        for i in 0..50 {
            let t = -20.0 + i as f64 * 0.83;
            assert_eq!(one.field(t), p.field_at(t));
        }
        let twin = PulseTrain::new(p, 0.0, 2).unwrap();
        assert_relative_eq!(twin.field(1.3), 2.0 * p.field_at(1.3), max_relative = 1e-15);
        let long = PulseTrain::new(p, 200.0, 10).unwrap();
        let t = 3.0 * 200.0 + 100.0;
        assert!(long.field(t).abs() < 1e-10 * p.peak_amplitude);
        assert_eq!(long.nearest_center(610.0), 600.0);
        assert_eq!(long.nearest_center(1e6), 1800.0);
        assert!(PulseTrain::new(p, 1.0, 0).is_err());
    }

    #[test]
    fn f_stirap_examples() {
        let half = std::f64::consts::FRAC_PI_2;
        let pair = FStirapEnvelopePair::new(1.0, half, 20.0, 30.0).unwrap();
        let (_, s) = pair.envelopes(20.0);
        assert_relative_eq!(s, (-(40.0f64 / 30.0).powi(2)).exp(), max_relative = 1e-12);
        let quarter = FStirapEnvelopePair::new(1.0, half / 2.0, 20.0, 30.0).unwrap();
        let (p, s) = quarter.envelopes(250.0);
        assert_relative_eq!(p / s, 1.0, max_relative = 1e-6);
        assert_relative_eq!(quarter.theta(1e4), half / 2.0, max_relative = 1e-12);
        let zero = FStirapEnvelopePair::new(1.0, 0.0, 20.0, 30.0).unwrap();
        assert_eq!(zero.envelopes(20.0).0, 0.0);
        assert!(FStirapEnvelopePair::new(1.0, 2.0, 20.0, 30.0).is_err());
    }

    #[test]
    fn f_stirap_angle_is_monotone() {
        let pair = FStirapEnvelopePair::new(2.0, 1.1, 15.0, 25.0).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for i in 0..2000 {
            let t = -150.0 + i as f64 * 0.15;
            let (p, s) = pair.envelopes(t);
            if p > 1e-12 * 2.0 && s > 1e-12 * 2.0 {
                let th = p.atan2(s);
                assert!(th >= prev - 1e-15);
                assert_relative_eq!(th, pair.theta(t), epsilon = 1e-12);
                prev = th;
            }
        }
        assert!(pair.theta(-1e4).abs() < 1e-12);
        assert_relative_eq!(pair.theta(1e4), 1.1, max_relative = 1e-12);
    }
}
