//! Liouville-von Neumann integration with the relaxation terms of the
//! four-level CARS model.
//!
//! The integrator is classical fixed-step RK4 on the full density matrix.
//! Hermiticity and trace are checked every step, positivity at recorded
//! steps; breaches abort with the offending step.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::{Hamiltonian, Mat};

pub const HERMITICITY_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-8;
pub const POSITIVITY_TOL: f64 = 1e-8;

/// Density matrix of an `N`-level system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix<const N: usize>(pub Mat<N>);

impl<const N: usize> DensityMatrix<N> {
    /// All population in state `|1>`.
    pub fn ground() -> Self {
        Self::basis(0)
    }

    /// Projector on basis state `k` (zero based).
    pub fn basis(k: usize) -> Self {
        let mut m = Mat::<N>::zeros();
        m[(k, k)] = C64::new(1.0, 0.0);
        Self(m)
    }

    /// Pure state from (unnormalized) amplitudes.
    pub fn pure(amplitudes: [C64; N]) -> Self {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        let mut m = Mat::<N>::zeros();
        for i in 0..N {
            for j in 0..N {
                m[(i, j)] = amplitudes[i] * amplitudes[j].conj() / norm;
            }
        }
        Self(m)
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn populations(&self) -> [f64; N] {
        std::array::from_fn(|k| self.0[(k, k)].re)
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }

    /// Largest elementwise deviation from Hermiticity.
    pub fn hermiticity_error(&self) -> f64 {
        (self.0 - self.0.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (self.0 + self.0.adjoint()) * C64::new(0.5, 0.0);
        let dynamic = DMatrix::from_iterator(N, N, herm.iter().cloned());
        SymmetricEigen::new(dynamic)
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Population decay rates `gamma[i][j]` (state `i` to `j`) and pure dephasing
/// rates `dephasing[i][j]`, indexed from zero with `i > j`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RelaxationRates {
    pub gamma: [[f64; 4]; 4],
    pub dephasing: [[f64; 4]; 4],
}

impl RelaxationRates {
    pub fn none() -> Self {
        Self::default()
    }

    /// Sets the decay rate from level `upper` to `lower` (one based).
    pub fn with_decay(mut self, upper: usize, lower: usize, rate: f64) -> Self {
        self.gamma[upper - 1][lower - 1] = rate;
        self
    }

    /// Sets the dephasing rate of the `(upper, lower)` coherence (one based).
    pub fn with_dephasing(mut self, upper: usize, lower: usize, rate: f64) -> Self {
        self.dephasing[upper - 1][lower - 1] = rate;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.gamma.iter().flatten().chain(self.dephasing.iter().flatten()).all(|&r| r == 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, row) in self.gamma.iter().enumerate() {
            for (j, &r) in row.iter().enumerate() {
                if !(r >= 0.0) {
                    return Err(Error::param("gamma", format!("rate ({},{}) = {r} is negative", i + 1, j + 1)));
                }
            }
        }
        for row in &self.dephasing {
            for &r in row {
                if !(r >= 0.0) {
                    return Err(Error::param("dephasing", format!("rate {r} is negative")));
                }
            }
        }
        Ok(())
    }
}

/// Relaxation contribution to `dρ/dt`. Rates touching levels beyond `N` are
/// ignored.
pub fn relaxation_derivative<const N: usize>(rho: &Mat<N>, rates: &RelaxationRates) -> Mat<N> {
    let mut d = Mat::<N>::zeros();
    // one-based accessors into the rate tables
    let g = |i: usize, j: usize| {
        if i <= N && j <= N {
            rates.gamma[i - 1][j - 1]
        } else {
            0.0
        }
    };
    let big = |i: usize, j: usize| {
        if i <= N && j <= N {
            rates.dephasing[i - 1][j - 1]
        } else {
            0.0
        }
    };
    let p = |k: usize| if k <= N { rho[(k - 1, k - 1)].re } else { 0.0 };

    let diag = [
        g(2, 1) * p(2) + g(3, 1) * p(3) + g(4, 1) * p(4),
        -g(2, 1) * p(2) + g(3, 2) * p(3) + g(4, 2) * p(4),
        -(g(3, 1) + g(3, 2)) * p(3),
        -(g(4, 1) + g(4, 2)) * p(4),
    ];
    for k in 0..N {
        d[(k, k)] = C64::new(diag[k], 0.0);
    }

    let damping = [
        (1, 2, 0.5 * g(2, 1) + big(2, 1)),
        (1, 3, 0.5 * (g(3, 1) + g(3, 2) + g(2, 1) + g(4, 1)) + big(3, 1)),
        (1, 4, 0.5 * (g(4, 1) + g(4, 2) + g(2, 1) + g(3, 1)) + big(4, 1)),
        (2, 3, 0.5 * (g(3, 1) + g(3, 2) + g(2, 1) + g(4, 2)) + big(3, 2)),
        (2, 4, 0.5 * (g(4, 1) + g(4, 2) + g(2, 1) + g(2, 3)) + big(4, 2)),
        (3, 4, big(4, 3)),
    ];
    for (i, j, rate) in damping {
        if i <= N && j <= N && rate != 0.0 {
            let (a, b) = (i - 1, j - 1);
            d[(a, b)] = -rho[(a, b)] * rate;
            d[(b, a)] = -rho[(b, a)] * rate;
        }
    }
    d
}

/// Uniform time grid of `steps + 1` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub start: f64,
    pub step: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn new(start: f64, end: f64, steps: usize) -> Result<Self> {
        if steps == 0 || !(end > start) {
            return Err(Error::param("grid", format!("need end > start and steps > 0, got [{start}, {end}] / {steps}")));
        }
        Ok(Self {
            start,
            step: (end - start) / steps as f64,
            steps,
        })
    }

    /// Grid covering `[tc - span*tau, tc + span*tau]` with step `tau/steps_per_tau`.
    pub fn around_pulse(center: f64, tau: f64, span_taus: f64, steps_per_tau: usize) -> Result<Self> {
        let steps = (2.0 * span_taus * steps_per_tau as f64).round() as usize;
        Self::new(center - span_taus * tau, center + span_taus * tau, steps)
    }

    pub fn time(&self, k: usize) -> f64 {
        self.start + k as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.time(self.steps)
    }
}

/// Recorded states of an evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<const N: usize> {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix<N>>,
}

impl<const N: usize> Trajectory<N> {
    pub fn last(&self) -> &DensityMatrix<N> {
        self.states.last().expect("trajectory is never empty")
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Largest value of population `k` over the recorded steps.
    pub fn max_population(&self, k: usize) -> f64 {
        self.states.iter().map(|s| s.get(k, k).re).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `(|ρij|, Im ρij)` series of a trajectory.
pub fn coherence<const N: usize>(traj: &Trajectory<N>, i: usize, j: usize) -> (Vec<f64>, Vec<f64>) {
    traj.states.iter().map(|s| (s.get(i, j).norm(), s.get(i, j).im)).unzip()
}

/// Final populations and coherence matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSummary<const N: usize> {
    pub populations: [f64; N],
    pub state: DensityMatrix<N>,
}

impl<const N: usize> StateSummary<N> {
    pub fn coherence(&self, i: usize, j: usize) -> f64 {
        self.state.get(i, j).norm()
    }
}

pub fn final_state_summary<const N: usize>(traj: &Trajectory<N>) -> StateSummary<N> {
    let last = *traj.last();
    StateSummary {
        populations: last.populations(),
        state: last,
    }
}

#[inline]
pub(crate) fn lvn_rhs<const N: usize>(h: &Mat<N>, rho: &Mat<N>, rates: &RelaxationRates, relax: bool) -> Mat<N> {
    let a = h * rho;
    // -i [H, ρ] with ρH = (Hρ)† for Hermitian operands
    let mut d = (a - a.adjoint()) * C64::new(0.0, -1.0);
    if relax {
        d += relaxation_derivative(rho, rates);
    }
    d
}

/// One RK4 step given the Hamiltonian at `t`, `t + h/2` and `t + h`.
#[inline]
pub(crate) fn rk4_step<const N: usize>(
    rho: &Mat<N>,
    h0: &Mat<N>,
    hm: &Mat<N>,
    h1: &Mat<N>,
    dt: f64,
    rates: &RelaxationRates,
    relax: bool,
) -> Mat<N> {
    let half = C64::new(0.5 * dt, 0.0);
    let full = C64::new(dt, 0.0);
    let k1 = lvn_rhs(h0, rho, rates, relax);
    let k2 = lvn_rhs(hm, &(rho + k1 * half), rates, relax);
    let k3 = lvn_rhs(hm, &(rho + k2 * half), rates, relax);
    let k4 = lvn_rhs(h1, &(rho + k3 * full), rates, relax);
    rho + (k1 + (k2 + k3) * C64::new(2.0, 0.0) + k4) * C64::new(dt / 6.0, 0.0)
}

pub(crate) fn check_state<const N: usize>(
    rho: &DensityMatrix<N>,
    trace0: f64,
    step: usize,
    time: f64,
    positivity: bool,
) -> Result<()> {
    let fail = |quantity, value| Error::Integration {
        step,
        time,
        quantity,
        value,
    };
    let herm = rho.hermiticity_error();
    if !(herm <= HERMITICITY_TOL) {
        return Err(fail("hermiticity error", herm));
    }
    let tr = rho.trace() - trace0;
    if !(tr.abs() <= TRACE_TOL) {
        return Err(fail("trace drift", tr));
    }
    if positivity {
        let ev = rho.min_eigenvalue();
        if !(ev >= -POSITIVITY_TOL) {
            return Err(fail("minimum eigenvalue", ev));
        }
    }
    Ok(())
}

/// Integrates `dρ/dt = -i[H, ρ] + relaxation` over `grid`, recording every
/// `record_every`-th step plus the final one.
pub fn evolve<const N: usize, H: Hamiltonian<N> + ?Sized>(
    h: &H,
    rho0: DensityMatrix<N>,
    grid: &TimeGrid,
    rates: &RelaxationRates,
    record_every: usize,
) -> Result<Trajectory<N>> {
    let record_every = record_every.max(1);
    let trace0 = rho0.trace();
    check_state(&rho0, trace0, 0, grid.start, true)?;
    let relax = !rates.is_zero();
    let capacity = grid.steps / record_every + 2;
    let mut times = Vec::with_capacity(capacity);
    let mut states = Vec::with_capacity(capacity);
    times.push(grid.start);
    states.push(rho0);

    let mut rho = rho0.0;
    let mut h0 = h.at(grid.start);
    for k in 0..grid.steps {
        let t = grid.time(k);
        let hm = h.at(t + 0.5 * grid.step);
        let h1 = h.at(grid.time(k + 1));
        rho = rk4_step(&rho, &h0, &hm, &h1, grid.step, rates, relax);
        h0 = h1;
        let recorded = (k + 1) % record_every == 0 || k + 1 == grid.steps;
        let state = DensityMatrix(rho);
        check_state(&state, trace0, k + 1, grid.time(k + 1), recorded)?;
        if recorded {
            times.push(grid.time(k + 1));
            states.push(state);
        }
    }
    Ok(Trajectory { times, states })
}
