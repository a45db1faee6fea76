//! Multi-layer propagation of the four CARS fields through a Gaussian cloud
//! of target molecules.

use std::io::Write;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{check_state, lvn_rhs, DensityMatrix, RelaxationRates};
use crate::error::{Error, Result};
use crate::hamiltonian::{four_level_matrix, CarsDetunings, Mat4};
use crate::pulse::{nearest_center, CarsPulses, ChirpLaw};
use crate::units;

/// Smallest allowed magnitude of a field-equation denominator.
pub const DENOMINATOR_GUARD: f64 = 1e-6;

/// Central layer spacing (m) that yields 199 layers from the peak out to five
/// widths for a 0.2 m cloud. Any value in [1.2805, 1.2870] mm does.
pub const CALIBRATED_CENTRAL_SPACING: f64 = 1.28375e-3;

/// Layers stop once `|z - z0|` exceeds this many widths.
pub const DEFAULT_FLOOR_WIDTHS: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub eta: f64,
    pub dz: f64,
    pub z: f64,
}

/// Scattering layers ordered from the cloud center outward.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerStack {
    pub layers: Vec<Layer>,
    pub sigma: f64,
    pub z0: f64,
}

impl LayerStack {
    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    /// The full cloud: the outward layers mirrored through `z0`, ordered by
    /// increasing `z`, with the central layer once.
    pub fn symmetric(&self) -> Self {
        let mut layers: Vec<Layer> = self
            .layers
            .iter()
            .skip(1)
            .rev()
            .map(|l| Layer {
                z: 2.0 * self.z0 - l.z,
                ..*l
            })
            .collect();
        layers.extend_from_slice(&self.layers);
        Self {
            layers,
            sigma: self.sigma,
            z0: self.z0,
        }
    }

    pub fn single(eta: f64) -> Self {
        Self {
            layers: vec![Layer { eta, dz: 0.0, z: 0.0 }],
            sigma: 0.0,
            z0: 0.0,
        }
    }

    /// First `n` layers.
    pub fn truncated(&self, n: usize) -> Self {
        Self {
            layers: self.layers.iter().take(n).copied().collect(),
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerSpec {
    /// Width of the Gaussian density profile, m.
    pub sigma: f64,
    /// Cloud center measured from the source, m.
    pub z0: f64,
    pub diameter: f64,
    pub molar_volume: f64,
    /// Spacing of the central layer, m.
    pub central_spacing: f64,
    pub floor_widths: f64,
}

impl LayerSpec {
    pub fn methanol(sigma: f64, z0: f64) -> Self {
        Self {
            sigma,
            z0,
            diameter: units::METHANOL_DIAMETER,
            molar_volume: units::IDEAL_GAS_MOLAR_VOLUME,
            central_spacing: CALIBRATED_CENTRAL_SPACING,
            floor_widths: DEFAULT_FLOOR_WIDTHS,
        }
    }
}

/// Fractional density at the cloud center.
pub fn peak_fraction(sigma: f64, diameter: f64, molar_volume: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    4.0 * molar_volume / (std::f64::consts::PI * diameter * diameter * units::AVOGADRO * tau.sqrt() * sigma)
}

/// Builds layers outward from the center. Each spacing is the central
/// spacing scaled by `eta0 / eta`.
pub fn build_layers(spec: &LayerSpec) -> Result<LayerStack> {
    for (name, v) in [
        ("sigma", spec.sigma),
        ("diameter", spec.diameter),
        ("molar_volume", spec.molar_volume),
        ("central_spacing", spec.central_spacing),
        ("floor_widths", spec.floor_widths),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::param(name, format!("must be positive, got {v}")));
        }
    }
    let eta0 = peak_fraction(spec.sigma, spec.diameter, spec.molar_volume);
    if eta0 > 1.0 {
        return Err(Error::Config {
            path: "layers".into(),
            message: format!("central fractional density {eta0} exceeds 1"),
        });
    }
    let reach = spec.floor_widths * spec.sigma;
    let mut layers = Vec::new();
    let mut offset = 0.0;
    while offset <= reach {
        let eta = eta0 * (-offset * offset / (2.0 * spec.sigma * spec.sigma)).exp();
        let dz = spec.central_spacing * eta0 / eta;
        layers.push(Layer {
            eta,
            dz,
            z: spec.z0 + offset,
        });
        offset += dz;
    }
    Ok(LayerStack {
        layers,
        sigma: spec.sigma,
        z0: spec.z0,
    })
}

/// Material constants for the field equations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumParams {
    /// Coupling constants `[κ13, κ23, κ24, κ14]` for pump, Stokes, probe and
    /// anti-Stokes, in ω21.
    pub kappa: [f64; 4],
    /// Atmospheric extinction, km^-1.
    pub extinction: f64,
    /// Path length through the atmosphere on each side of the cloud, km.
    pub path_km: f64,
}

impl MediumParams {
    pub fn methanol() -> Self {
        let k = kappa_constant(units::METHANOL_DIPOLE / units::DEBYE, ideal_gas_density());
        Self {
            kappa: [k; 4],
            extinction: 0.0,
            path_km: 0.0,
        }
    }
}

/// Number density of an ideal gas at standard conditions, m^-3.
pub fn ideal_gas_density() -> f64 {
    units::AVOGADRO / units::IDEAL_GAS_MOLAR_VOLUME
}

/// `n μ0 μ² c² / 3ħ` in ω21 for a dipole in debye and density in m^-3.
pub fn kappa_constant(mu_debye: f64, n: f64) -> f64 {
    let mu = mu_debye * units::DEBYE;
    let si = n * units::VACUUM_PERMEABILITY * mu * mu * units::SPEED_OF_LIGHT.powi(2) / (3.0 * units::HBAR);
    si / units::OMEGA21_HZ
}

pub fn beer_attenuate(intensity: f64, z_km: f64, beta_e: f64) -> f64 {
    intensity * (-beta_e * z_km).exp()
}

/// Adiabatically eliminated coherences `(ρ13, ρ23, ρ14, ρ24)`.
///
/// `fields` is `[Ωp, Ωs, Ωpr, Ωas]`, `rates` is `(αp, αs)` and `dt` is the
/// offset from the pulse center.
pub fn adiabatic_coherences(
    rho11: f64,
    rho22: f64,
    rho12: C64,
    fields: [f64; 4],
    d: &CarsDetunings,
    rates: (f64, f64),
    t: f64,
    dt: f64,
) -> Result<[C64; 4]> {
    let den = Denominators::new(d, rates, t, dt)?;
    let [p, s, pr, a] = fields;
    let rho21 = rho12.conj();
    Ok([
        (rho12 * s + p * rho11) / (2.0 * den.pump),
        (rho21 * p + s * rho22) / (2.0 * den.stokes),
        (rho12 * pr + a * rho11) / (2.0 * den.anti_stokes),
        (rho21 * a + pr * rho22) / (2.0 * den.probe),
    ])
}

struct Denominators {
    pump: f64,
    stokes: f64,
    probe: f64,
    anti_stokes: f64,
}

impl Denominators {
    fn new(d: &CarsDetunings, (ap, a_s): (f64, f64), t: f64, dt: f64) -> Result<Self> {
        let out = Self {
            pump: d.delta_s + ap * dt,
            stokes: d.delta_s + a_s * dt,
            probe: d.delta_as + (a_s - ap) * dt,
            anti_stokes: d.delta_as,
        };
        for (field, value) in [
            ("pump", out.pump),
            ("stokes", out.stokes),
            ("probe", out.probe),
            ("anti_stokes", out.anti_stokes),
        ] {
            if !(value.abs() > DENOMINATOR_GUARD) {
                return Err(Error::SingularDenominator { field, time: t, value });
            }
        }
        Ok(out)
    }
}

/// The four Rabi envelopes `[Ωp, Ωs, Ωpr, Ωas]` of a pulse train on a shared
/// uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSet {
    pub start: f64,
    pub step: f64,
    pub envelopes: [Vec<f64>; 4],
    pub laws: [ChirpLaw; 4],
    pub carriers: [f64; 4],
    pub first_center: f64,
    pub period: f64,
    pub count: usize,
}

impl FieldSet {
    /// Samples `count` copies of `pulses` separated by `period`, covering
    /// `span_taus` durations beyond the first and last pulse. The anti-Stokes
    /// envelope starts at zero.
    pub fn from_train(pulses: &CarsPulses, period: f64, count: usize, step: f64, span_taus: f64) -> Result<Self> {
        if count == 0 {
            return Err(Error::param("count", "a train needs at least one pulse"));
        }
        if !(step > 0.0) {
            return Err(Error::param("step", format!("must be positive, got {step}")));
        }
        if count > 1 && !(period > 0.0) {
            return Err(Error::param("period", format!("must be positive, got {period}")));
        }
        let first = pulses.center_time();
        let last = first + (count - 1) as f64 * period;
        let margin = span_taus * pulses.tau();
        let start = first - margin;
        let mut n = ((last + margin - start) / step).ceil() as usize + 1;
        if n % 2 == 0 {
            n += 1;
        }
        let sample = |p: &crate::pulse::ChirpedPulse| -> Vec<f64> {
            (0..n)
                .map(|k| {
                    let t = start + k as f64 * step;
                    (0..count).map(|j| p.shifted(j as f64 * period).envelope_at(t)).sum()
                })
                .collect()
        };
        Ok(Self {
            start,
            step,
            envelopes: [
                sample(&pulses.pump),
                sample(&pulses.stokes),
                sample(&pulses.probe),
                vec![0.0; n],
            ],
            laws: [
                pulses.pump.chirp_law,
                pulses.stokes.chirp_law,
                pulses.probe.chirp_law,
                pulses.anti_stokes.chirp_law,
            ],
            carriers: [
                pulses.pump.carrier,
                pulses.stokes.carrier,
                pulses.probe.carrier,
                pulses.anti_stokes.carrier,
            ],
            first_center: first,
            period,
            count,
        })
    }

    pub fn len(&self) -> usize {
        self.envelopes[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn time(&self, k: usize) -> f64 {
        self.start + k as f64 * self.step
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.time(k)).collect()
    }

    /// Offset of `t` from the nearest pulse center.
    pub fn offset(&self, t: f64) -> f64 {
        t - nearest_center(self.first_center, self.period, self.count, t)
    }

    /// Largest envelope magnitude of field `q`.
    pub fn peak(&self, q: usize) -> f64 {
        self.envelopes[q].iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Real field of component `q`: envelope times the chirped carrier.
    pub fn real_field(&self, q: usize) -> Vec<f64> {
        (0..self.len())
            .map(|k| {
                let t = self.time(k);
                let dt = self.offset(t);
                let phase = self.carriers[q] * dt + 0.5 * self.laws[q].rate(dt) * dt * dt;
                self.envelopes[q][k] * phase.cos()
            })
            .collect()
    }

    fn scale(&mut self, factor: f64) {
        for env in &mut self.envelopes {
            for v in env.iter_mut() {
                *v *= factor;
            }
        }
    }

    fn check(&self) -> Result<()> {
        if self.len() < 3 || self.len() % 2 == 0 {
            return Err(Error::param("fields", "grid needs an odd number of at least three samples"));
        }
        for (q, env) in self.envelopes.iter().enumerate() {
            if env.len() != self.len() {
                return Err(Error::param("fields", format!("envelope {q} has the wrong length")));
            }
            if let Some(k) = env.iter().position(|v| !v.is_finite()) {
                return Err(Error::Integration {
                    step: k,
                    time: self.time(k),
                    quantity: "field envelope",
                    value: env[k],
                });
            }
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "pump", "stokes", "probe", "anti_stokes"])?;
        for k in 0..self.len() {
            let e = &self.envelopes;
            w.serialize((self.time(k), e[0][k], e[1][k], e[2][k], e[3][k]))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Everything a layer needs besides the incoming fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterParams {
    pub medium: MediumParams,
    pub detunings: CarsDetunings,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerOutput {
    pub fields: FieldSet,
    pub final_state: DensityMatrix<4>,
    pub max_abs_rho12: f64,
}

/// Time derivative of the field corrections from the reduced field equations.
fn field_rhs(eta: f64, params: &ScatterParams, carriers: &[f64; 4], env: [f64; 4], im12: f64, den: &Denominators) -> [f64; 4] {
    let k = &params.medium.kappa;
    let [p, s, pr, a] = env;
    [
        -eta / (2.0 * den.pump) * k[0] * carriers[0] * s * im12,
        eta / (2.0 * den.stokes) * k[1] * carriers[1] * p * im12,
        eta / (2.0 * den.probe) * k[2] * carriers[2] * a * im12,
        -eta / (2.0 * den.anti_stokes) * k[3] * carriers[3] * pr * im12,
    ]
}

struct LayerSystem<'a> {
    fields: &'a FieldSet,
    eta: f64,
    params: &'a ScatterParams,
    rates: &'a RelaxationRates,
    relax: bool,
}

impl LayerSystem<'_> {
    /// Right-hand side at sample `k`, with chirp phases measured from `center`.
    fn rhs(&self, k: usize, center: f64, rho: &Mat4, delta: &[f64; 4]) -> Result<(Mat4, [f64; 4])> {
        let f = self.fields;
        let t = f.time(k);
        let dt = t - center;
        let ap = f.laws[0].rate(dt);
        let a_s = f.laws[1].rate(dt);
        let den = Denominators::new(&self.params.detunings, (ap, a_s), t, dt)?;
        let env: [f64; 4] = std::array::from_fn(|q| f.envelopes[q][k] + delta[q]);
        let h = four_level_matrix(env, ap, a_s, dt, &self.params.detunings);
        let d_rho = lvn_rhs(&h, rho, self.rates, self.relax);
        let d_delta = field_rhs(self.eta, self.params, &f.carriers, env, rho[(0, 1)].im, &den);
        Ok((d_rho, d_delta))
    }
}

fn axpy(base: &[f64; 4], k: &[f64; 4], h: f64) -> [f64; 4] {
    std::array::from_fn(|q| base[q] + h * k[q])
}

/// Co-evolves one layer of molecules, starting in the ground state, with the
/// field equations scaled by the layer's fractional density `eta`.
pub fn scatter_layer(
    fields: &FieldSet,
    eta: f64,
    params: &ScatterParams,
    rates: &RelaxationRates,
) -> Result<LayerOutput> {
    fields.check()?;
    let sys = LayerSystem {
        fields,
        eta,
        params,
        rates,
        relax: !rates.is_zero(),
    };
    let n = fields.len();
    let dt = 2.0 * fields.step;
    let mut rho = DensityMatrix::<4>::ground().0;
    let mut delta = [0.0; 4];
    let mut deltas = vec![[0.0; 4]; n];
    let mut slopes = vec![[0.0; 4]; n];
    let mut max12: f64 = 0.0;
    let center_of = |k: usize| nearest_center(fields.first_center, fields.period, fields.count, fields.time(k));
    slopes[0] = sys.rhs(0, center_of(0), &rho, &delta)?.1;
    let half = C64::new(0.5 * dt, 0.0);
    let full = C64::new(dt, 0.0);
    for k in (0..n - 1).step_by(2) {
        // the frame switch between pulses falls between steps, never inside one
        let c = center_of(k + 1);
        let (r1, f1) = sys.rhs(k, c, &rho, &delta)?;
        let (r2, f2) = sys.rhs(k + 1, c, &(rho + r1 * half), &axpy(&delta, &f1, 0.5 * dt))?;
        let (r3, f3) = sys.rhs(k + 1, c, &(rho + r2 * half), &axpy(&delta, &f2, 0.5 * dt))?;
        let (r4, f4) = sys.rhs(k + 2, c, &(rho + r3 * full), &axpy(&delta, &f3, dt))?;
        rho += (r1 + (r2 + r3) * C64::new(2.0, 0.0) + r4) * C64::new(dt / 6.0, 0.0);
        for q in 0..4 {
            delta[q] += dt / 6.0 * (f1[q] + 2.0 * (f2[q] + f3[q]) + f4[q]);
        }
        let step = k / 2 + 1;
        let t = fields.time(k + 2);
        check_state(&DensityMatrix(rho), 1.0, step, t, step % 1000 == 0)?;
        for (q, v) in delta.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::Integration {
                    step,
                    time: t,
                    quantity: ["pump", "stokes", "probe", "anti_stokes"][q],
                    value: *v,
                });
            }
        }
        max12 = max12.max(rho[(0, 1)].norm());
        deltas[k + 2] = delta;
        slopes[k + 2] = sys.rhs(k + 2, c, &rho, &delta)?.1;
    }
    let mut out = fields.clone();
    for k in 0..n {
        let d = if k % 2 == 0 {
            deltas[k]
        } else {
            let (a, b) = (&deltas[k - 1], &deltas[k + 1]);
            let (sa, sb) = (&slopes[k - 1], &slopes[k + 1]);
            std::array::from_fn(|q| 0.5 * (a[q] + b[q]) + dt / 8.0 * (sa[q] - sb[q]))
        };
        for q in 0..4 {
            out.envelopes[q][k] += d[q];
        }
    }
    Ok(LayerOutput {
        fields: out,
        final_state: DensityMatrix(rho),
        max_abs_rho12: max12,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayerRecord {
    pub index: usize,
    pub z: f64,
    pub eta: f64,
    pub anti_stokes_peak: f64,
    pub final_abs_rho12: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Propagation {
    pub records: Vec<LayerRecord>,
    /// Field snapshots after every `record_every`-th layer, keyed by layer index.
    pub snapshots: Vec<(usize, FieldSet)>,
    pub fields: FieldSet,
}

impl Propagation {
    /// Anti-Stokes peak after the last layer over the peak after the first.
    pub fn buildup_ratio(&self) -> f64 {
        match (self.records.first(), self.records.last()) {
            (Some(a), Some(b)) => b.anti_stokes_peak / a.anti_stokes_peak,
            _ => f64::NAN,
        }
    }

    pub fn write_records_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.records {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Sends `fields` through every layer in order, with Beer attenuation on the
/// way in and out. `record_every = 0` disables snapshots.
pub fn propagate(
    fields: &FieldSet,
    stack: &LayerStack,
    params: &ScatterParams,
    rates: &RelaxationRates,
    record_every: usize,
) -> Result<Propagation> {
    if stack.is_empty() {
        return Err(Error::param("layers", "the layer stack is empty"));
    }
    let m = &params.medium;
    let amplitude = beer_attenuate(1.0, m.path_km, m.extinction).sqrt();
    let mut current = fields.clone();
    if amplitude != 1.0 {
        current.scale(amplitude);
    }
    let mut records = Vec::with_capacity(stack.len());
    let mut snapshots = Vec::new();
    for (i, layer) in stack.layers.iter().enumerate() {
        let out = scatter_layer(&current, layer.eta, params, rates)?;
        current = out.fields;
        let index = i + 1;
        log::debug!("layer {index}: anti-Stokes peak {:e}", current.peak(3));
        records.push(LayerRecord {
            index,
            z: layer.z,
            eta: layer.eta,
            anti_stokes_peak: current.peak(3),
            final_abs_rho12: out.final_state.get(0, 1).norm(),
        });
        if record_every > 0 && index % record_every == 0 {
            snapshots.push((index, current.clone()));
        }
    }
    if amplitude != 1.0 {
        current.scale(amplitude);
    }
    Ok(Propagation {
        records,
        snapshots,
        fields: current,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulse::{Carriers, ChirpScheme};
    use approx::assert_relative_eq;
    use nalgebra::{Matrix4, Vector4};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn detunings() -> CarsDetunings {
        CarsDetunings {
            delta_s: 10.0,
            delta_as: 10.0,
            two_photon: 0.0,
        }
    }

    fn params() -> ScatterParams {
        ScatterParams {
            medium: MediumParams::methanol(),
            detunings: detunings(),
        }
    }

    fn train(count: usize, scheme: ChirpScheme, ratio: f64) -> FieldSet {
        let pulses = CarsPulses::new((1.0, 1.0, 1.0), 4.66, ratio, 0.0, scheme, Carriers::default()).unwrap();
        FieldSet::from_train(&pulses, 85.05, count, 0.01, 6.0).unwrap()
    }

    #[test]
    fn methanol_layers() {
        let stack = build_layers(&LayerSpec::methanol(0.2, 1000.0)).unwrap();
        assert_eq!(stack.len(), 199);
        assert_relative_eq!(stack.layers[0].eta, 9.4531e-6, max_relative = 1e-4);
        assert_eq!(stack.layers[0].z, 1000.0);
        for w in stack.layers.windows(2) {
            assert!(w[1].eta < w[0].eta);
            assert!(w[1].dz > w[0].dz);
            assert!(w[1].z > w[0].z);
        }
        let wide = build_layers(&LayerSpec::methanol(0.4, 1000.0)).unwrap();
        assert!(wide.len() > stack.len());
        let full = stack.symmetric();
        assert_eq!(full.len(), 2 * 199 - 1);
        assert_eq!(full.layers[198], stack.layers[0]);
        assert_relative_eq!(full.layers[0].z - 1000.0, 1000.0 - full.layers[396].z, epsilon = 1e-9);
    }

    #[test]
    fn calibration_bracket() {
        for spacing in [1.2806e-3, 1.2869e-3] {
            let spec = LayerSpec {
                central_spacing: spacing,
                ..LayerSpec::methanol(0.2, 0.0)
            };
            assert_eq!(build_layers(&spec).unwrap().len(), 199);
        }
    }

    #[test]
    fn unphysical_density_rejected() {
        let spec = LayerSpec {
            diameter: 1e-14,
            ..LayerSpec::methanol(0.2, 0.0)
        };
        assert!(matches!(build_layers(&spec), Err(Error::Config { .. })));
    }

    #[test]
    fn kappa_examples() {
        let n = ideal_gas_density();
        let k = kappa_constant(1.70, n);
        assert_relative_eq!(k, 3.636e-3, max_relative = 5e-3);
        assert_relative_eq!(k, 3.626329478983409e-3, max_relative = 1e-9);
        assert_relative_eq!(kappa_constant(3.40, n), 4.0 * k, max_relative = 1e-12);
        assert_relative_eq!(kappa_constant(1.70, 2.0 * n), 2.0 * k, max_relative = 1e-12);
    }

    #[test]
    fn beer_examples() {
        assert_eq!(beer_attenuate(2.0, 0.0, 0.55), 2.0);
        assert_relative_eq!(beer_attenuate(1.0, 1.0, 0.55), 0.5769498103804866, max_relative = 1e-12);
        assert_eq!(beer_attenuate(3.0, 7.0, 0.0), 3.0);
    }

    #[test]
    fn coherence_examples() {
        let d = detunings();
        let zero = adiabatic_coherences(0.6, 0.4, C64::new(0.1, 0.2), [0.0; 4], &d, (0.01, -0.02), 1.0, 1.0).unwrap();
        assert_eq!(zero, [C64::new(0.0, 0.0); 4]);
        let f = [0.7, 0.3, 0.2, 0.1];
        let c = adiabatic_coherences(1.0, 0.0, C64::new(0.0, 0.0), f, &d, (0.01, -0.02), 3.0, 3.0).unwrap();
        assert_relative_eq!(c[0].re, 0.7 / (2.0 * (10.0 + 0.03)));
        let err = adiabatic_coherences(1.0, 0.0, C64::new(0.0, 0.0), f, &d, (-1.0, 0.0), 10.0, 10.0).unwrap_err();
        assert!(matches!(err, Error::SingularDenominator { field: "pump", .. }));
    }

    /// Steady state of the excited-state coherence equations with their time
    /// derivatives, excited populations and `ρ34` set to zero, solved as a
    /// linear system.
    fn steady_state_oracle(rho11: f64, rho22: f64, rho12: C64, f: [f64; 4], d: &CarsDetunings, (ap, a_s): (f64, f64), dt: f64) -> [C64; 4] {
        let [p, s, pr, a] = f;
        let i = C64::new(0.0, 1.0);
        let apr = a_s - ap;
        let rho21 = rho12.conj();
        // unknowns x = (ρ13, ρ23, ρ14, ρ24); rows: 0 = M x + b
        let m = Matrix4::from_diagonal(&Vector4::new(
            -i * (d.delta_s + ap * dt),
            -i * (d.delta_s + a_s * dt),
            -i * d.delta_as,
            -i * (d.delta_as + apr * dt),
        ));
        let b = Vector4::new(
            0.5 * i * p * rho11 + 0.5 * i * s * rho12,
            0.5 * i * s * rho22 + 0.5 * i * p * rho21,
            0.5 * i * a * rho11 + 0.5 * i * pr * rho12,
            0.5 * i * pr * rho22 + 0.5 * i * a * rho21,
        );
        let x = m.lu().solve(&(-b)).unwrap();
        [x[0], x[1], x[2], x[3]]
    }

    #[test]
    fn coherences_match_linear_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let d = CarsDetunings {
                delta_s: rng.gen_range(2.0..20.0),
                delta_as: rng.gen_range(2.0..20.0),
                two_photon: 0.0,
            };
            let f: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.0..2.0));
            let r11 = rng.gen_range(0.0..1.0);
            let r12 = C64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
            let rates = (rng.gen_range(-0.05..0.05), rng.gen_range(-0.05..0.05));
            let dt = rng.gen_range(-20.0..20.0);
            let got = adiabatic_coherences(r11, 1.0 - r11, r12, f, &d, rates, dt, dt).unwrap();
            let want = steady_state_oracle(r11, 1.0 - r11, r12, f, &d, rates, dt);
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn field_equations_reduce_to_coherences() {
        let d = detunings();
        let p = params();
        let carriers = [4.0, 3.0, 4.0, 5.0];
        let env = [0.8, 0.6, 0.5, 0.2];
        let r12 = C64::new(0.1, 0.3);
        let rates = (-0.01, 0.01);
        let den = Denominators::new(&d, rates, 5.0, 5.0).unwrap();
        let rhs = field_rhs(0.5, &p, &carriers, env, r12.im, &den);
        let c = adiabatic_coherences(0.6, 0.4, r12, env, &d, rates, 5.0, 5.0).unwrap();
        let im = [c[0].im, c[1].im, c[3].im, c[2].im];
        for q in 0..4 {
            let intermediate = -0.5 * p.medium.kappa[q] * carriers[q] * im[q];
            assert_relative_eq!(rhs[q], intermediate, max_relative = 1e-12);
        }
    }

    #[test]
    fn sign_structure() {
        let den = Denominators::new(&detunings(), (0.01, 0.02), 1.0, 1.0).unwrap();
        let rhs = field_rhs(0.1, &params(), &[4.0, 3.0, 4.0, 5.0], [1.0, 1.0, 1.0, 0.5], 0.2, &den);
        assert!(rhs[0] < 0.0);
        assert!(rhs[1] > 0.0);
    }

    #[test]
    fn zero_density_is_identity() {
        let f = train(2, ChirpScheme::TransformLimited, 0.0);
        let out = scatter_layer(&f, 0.0, &params(), &RelaxationRates::none()).unwrap();
        assert_eq!(out.fields, f);
        assert!(out.max_abs_rho12 > 0.0);
        let p = propagate(&f, &LayerStack::single(0.0), &params(), &RelaxationRates::none(), 1).unwrap();
        assert_eq!(p.fields, f);
        assert_eq!(p.snapshots.len(), 1);
    }

    #[test]
    fn no_coherence_is_identity() {
        let mut f = train(1, ChirpScheme::TransformLimited, 0.0);
        for q in [1, 2] {
            f.envelopes[q].iter_mut().for_each(|v| *v = 0.0);
        }
        let out = scatter_layer(&f, 1e-3, &params(), &RelaxationRates::none()).unwrap();
        assert_eq!(out.fields, f);
    }

    #[test]
    fn anti_stokes_grows_per_layer() {
        let f = train(2, ChirpScheme::TransformLimited, 0.0);
        let stack = build_layers(&LayerSpec::methanol(0.2, 1000.0)).unwrap().truncated(3);
        let run = propagate(&f, &stack, &params(), &RelaxationRates::none(), 0).unwrap();
        assert!(run.records[0].anti_stokes_peak > 0.0);
        for w in run.records.windows(2) {
            assert!(w[1].anti_stokes_peak > w[0].anti_stokes_peak);
        }
        let again = propagate(&f, &stack, &params(), &RelaxationRates::none(), 0).unwrap();
        assert_eq!(run, again);
    }

    #[test]
    fn attenuation_scales_fields() {
        let f = train(1, ChirpScheme::TransformLimited, 0.0);
        let mut p = params();
        p.medium.extinction = 0.55;
        p.medium.path_km = 1.0;
        let run = propagate(&f, &LayerStack::single(0.0), &p, &RelaxationRates::none(), 0).unwrap();
        assert_relative_eq!(run.fields.peak(0), f.peak(0) * 0.5769498103804866, max_relative = 1e-12);
    }

    #[test]
    fn singular_denominator_aborts() {
        let mut p = params();
        p.detunings.delta_as = 0.0;
        let f = train(1, ChirpScheme::TransformLimited, 0.0);
        let err = scatter_layer(&f, 1e-3, &p, &RelaxationRates::none()).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }
}
