//! Pseudospectral solvers for the nondimensionalized free-surface
//! water-waves equations and their asymptotic models.
//!
//! The crate is organized around the dimensionless parameters (ε, μ, γ, β):
//!
//! - [`params`] — regime presets, parameter-class membership, and the
//!   physical-to-dimensionless conversion;
//! - [`spectral`] — periodic grids, Fourier multipliers, anisotropic
//!   operators, norms and field snapshots;
//! - [`dnop`] — the Dirichlet-Neumann operator by an elliptic solve on the
//!   straightened strip, by shallow-water expansion, and by small-amplitude
//!   expansion, with the shape derivative and a Taylor-sign check;
//! - [`waterwaves`] — time integration of the full surface system;
//! - [`asymptotics`] — shallow-water, Green-Naghdi/Serre, symmetric
//!   Boussinesq, KP and full-dispersion integrators with their initial-data
//!   and reconstruction maps;
//! - [`harness`] — parameter sweeps, reference-vs-model error measurement,
//!   log-log rate fits, and the CLI.

pub mod asymptotics;
pub mod dnop;
pub mod error;
pub mod harness;
pub mod params;
pub mod spectral;
pub mod waterwaves;

pub use error::{Error, Result};
