//! Simulation library for chirped-pulse control of coherent anti-Stokes
//! Raman scattering (CARS) and related adiabatic passage schemes.
//!
//! Everything is dimensionless: frequencies in units of the Raman transition
//! frequency `omega21`, times in `1/omega21`, `hbar = 1`.

pub mod config;
pub mod dressed;
pub mod dynamics;
pub mod error;
pub mod hamiltonian;
pub mod output;
pub mod phase;
pub mod propagation;
pub mod pulse;
pub mod run;
pub mod scan;
pub mod scenario;
pub mod signal;
pub mod units;
pub mod wigner;

pub use error::{Error, Result};
