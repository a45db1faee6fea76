//! Builds and runs the simulations described by configuration records.

use crate::config::{relaxation_rates, CcarsConfig, FStirapConfig, PropagateConfig, StirapConfig, WignerConfig, WignerMethod};
use crate::dynamics::{evolve, DensityMatrix, TimeGrid, Trajectory};
use crate::error::Result;
use crate::hamiltonian::{CarsDetunings, ChirpedStirap4Params, FourLevelCarsParams, StirapParams, SuperEffectiveParams};
use crate::propagation::{build_layers, propagate, FieldSet, LayerStack, Propagation, ScatterParams};
use crate::pulse::{CarsPulses, ChirpedPulse, FStirapEnvelopePair};
use crate::wigner::{SampledField, WignerGrid};

impl CcarsConfig {
    pub fn detunings(&self) -> CarsDetunings {
        CarsDetunings {
            delta_s: self.delta,
            delta_as: self.delta,
            two_photon: self.two_photon,
        }
    }

    /// Balanced pulse set centered at `t = 0`.
    pub fn pulses(&self) -> Result<CarsPulses> {
        CarsPulses::balanced(
            self.omega3_0,
            self.delta,
            self.tau0,
            self.chirp_ratio,
            0.0,
            self.scheme,
            Default::default(),
        )
    }

    pub fn four_level(&self) -> Result<FourLevelCarsParams> {
        FourLevelCarsParams::new(self.pulses()?, self.detunings())
    }

    pub fn time_grid(&self) -> Result<TimeGrid> {
        let pulses = self.pulses()?;
        TimeGrid::around_pulse(pulses.center_time(), pulses.tau(), self.grid.span, self.grid.steps_per_width)
    }
}

/// Super-effective two-level run from the ground state.
pub fn run_ccars2(cfg: &CcarsConfig, record_every: usize) -> Result<Trajectory<2>> {
    let h = SuperEffectiveParams::new(cfg.four_level()?);
    let rates = relaxation_rates(&cfg.relaxation);
    evolve(&h, DensityMatrix::ground(), &cfg.time_grid()?, &rates, record_every)
}

/// Exact four-level run from the ground state.
pub fn run_ccars4(cfg: &CcarsConfig, record_every: usize) -> Result<Trajectory<4>> {
    let h = cfg.four_level()?;
    let rates = relaxation_rates(&cfg.relaxation);
    evolve(&h, DensityMatrix::ground(), &cfg.time_grid()?, &rates, record_every)
}

impl StirapConfig {
    pub fn params(&self) -> StirapParams {
        StirapParams {
            two_photon: self.two_photon,
            alpha: self.alpha,
            beta: self.beta,
            ..StirapParams::gaussian_pair(self.omega0, self.width, self.separation, self.detuning)
        }
    }

    pub fn time_grid(&self) -> Result<TimeGrid> {
        TimeGrid::around_pulse(0.0, self.width, self.grid.span, self.grid.steps_per_width)
    }
}

pub fn run_stirap3(cfg: &StirapConfig) -> Result<Trajectory<3>> {
    let rates = relaxation_rates(&cfg.relaxation);
    evolve(&cfg.params(), DensityMatrix::ground(), &cfg.time_grid()?, &rates, cfg.grid.record_every)
}

pub fn run_stirap4(cfg: &StirapConfig) -> Result<Trajectory<4>> {
    let h = ChirpedStirap4Params {
        stirap: cfg.params(),
        splitting: cfg.splitting.unwrap_or(0.0),
    };
    let rates = relaxation_rates(&cfg.relaxation);
    evolve(&h, DensityMatrix::ground(), &cfg.time_grid()?, &rates, cfg.grid.record_every)
}

impl FStirapConfig {
    pub fn params(&self) -> Result<StirapParams> {
        let pair = FStirapEnvelopePair::new(self.omega0, self.mixing_angle, self.t_p, self.tau)?;
        Ok(StirapParams {
            pump: pair.pump(),
            stokes: pair.stokes(),
            t_p: self.t_p,
            t_s: -self.t_p,
            detuning: self.detuning,
            two_photon: self.two_photon,
            alpha: 0.0,
            beta: 0.0,
        })
    }
}

pub fn run_fstirap(cfg: &FStirapConfig) -> Result<Trajectory<3>> {
    let grid = TimeGrid::around_pulse(0.0, cfg.tau, cfg.grid.span, cfg.grid.steps_per_width)?;
    evolve(&cfg.params()?, DensityMatrix::ground(), &grid, &Default::default(), cfg.grid.record_every)
}

impl PropagateConfig {
    pub fn fields(&self) -> Result<FieldSet> {
        let [p, s, pr] = self.amplitudes;
        let pulses = CarsPulses::new((p, s, pr), self.tau0, self.chirp_ratio, 0.0, self.scheme, self.carriers)?;
        FieldSet::from_train(&pulses, self.period, self.count, self.step, self.span_taus)
    }

    pub fn stack(&self) -> Result<LayerStack> {
        let stack = build_layers(&self.layers.spec())?;
        Ok(match self.layers.max_layers {
            Some(n) => stack.truncated(n),
            None => stack,
        })
    }

    pub fn scatter_params(&self) -> ScatterParams {
        ScatterParams {
            medium: self.medium,
            detunings: CarsDetunings {
                delta_s: self.delta,
                delta_as: self.delta,
                two_photon: self.two_photon,
            },
        }
    }
}

pub fn run_propagation(cfg: &PropagateConfig) -> Result<(FieldSet, Propagation)> {
    let fields = cfg.fields()?;
    let run = propagate(
        &fields,
        &cfg.stack()?,
        &cfg.scatter_params(),
        &relaxation_rates(&cfg.relaxation),
        cfg.snapshot_every,
    )?;
    Ok((fields, run))
}

impl WignerConfig {
    pub fn pulse(&self) -> Result<ChirpedPulse> {
        ChirpedPulse::linear(self.amplitude, self.carrier, self.tau0, self.alpha_prime, self.center)
    }
}

pub fn run_wigner(cfg: &WignerConfig) -> Result<WignerGrid> {
    let pulse = cfg.pulse()?;
    let times = cfg.times.values();
    let freqs = cfg.freqs.values();
    match cfg.method {
        WignerMethod::ClosedForm => Ok(WignerGrid::closed_form(&pulse, &times, &freqs)),
        WignerMethod::Numeric => {
            let step = cfg.sample_step;
            let pad = 6.0 * pulse.tau() + (cfg.times.min - cfg.center).max(0.0);
            let start = cfg.times.min - (pad / step).ceil() * step;
            let end = cfg.times.max.max(cfg.center) + 6.0 * pulse.tau();
            let count = ((end - start) / step).ceil() as usize + 1;
            let field = SampledField::sample_pulse(&pulse, start, step, count)?;
            WignerGrid::numeric(&field, &times, &freqs)
        }
    }
}
