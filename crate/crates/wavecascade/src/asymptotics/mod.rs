//! Integrators for the asymptotic model hierarchy: shallow water,
//! Green-Naghdi/Serre, symmetric Boussinesq, KP, and the full-dispersion
//! deep-water model, each with its initial-data and reconstruction maps.

mod boussinesq;
mod fd;
mod gn;
mod kp;
mod sw;

pub use boussinesq::{
    boussinesq_initial, boussinesq_integrate, boussinesq_reconstruct, BoussinesqCoeffs,
    BoussinesqSystem,
};
pub use fd::{fd_initial, fd_integrate, FullDispersion};
pub use gn::{gn_initial_velocity, gn_integrate, gn_reconstruct, GreenNaghdi};
pub use kp::{kp_initial, kp_integrate, kp_reconstruct, kp_velocity_x, KpPairState};
pub use sw::{sw_integrate, ShallowWater};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::spectral::{PeriodicGrid, ScalarField, VectorField};
use crate::waterwaves::BLOWUP_THRESHOLD;

/// State of the first-order models: elevation and a horizontal velocity.
#[derive(Debug, Clone)]
pub struct HyperbolicState {
    pub zeta: ScalarField,
    pub v: VectorField,
    pub time: f64,
}

impl HyperbolicState {
    pub fn rest(grid: &Arc<PeriodicGrid>) -> Self {
        Self {
            zeta: ScalarField::zeros(grid),
            v: VectorField::zeros(grid),
            time: 0.0,
        }
    }

    pub fn new(zeta: ScalarField, v: VectorField, time: f64) -> Self {
        Self { zeta, v, time }
    }

    fn stepped(&self, a: f64, d: &(ScalarField, VectorField), time: f64) -> Self {
        let mut zeta = self.zeta.clone();
        let mut v = self.v.clone();
        zeta.axpy(a, &d.0);
        v.axpy(a, &d.1);
        Self { zeta, v, time }
    }

    pub fn max_abs(&self) -> f64 {
        self.zeta.max_abs().max(self.v.max_abs())
    }
}

#[derive(Debug)]
pub struct ModelTrajectory {
    pub snapshots: Vec<HyperbolicState>,
    pub steps: usize,
}

impl ModelTrajectory {
    pub fn last(&self) -> &HyperbolicState {
        self.snapshots.last().expect("at least the initial state")
    }
}

/// Shared RK4 driver for the (ζ, V) models.
pub(crate) fn rk4_drive<F>(
    state0: &HyperbolicState,
    t_end: f64,
    dt: f64,
    snapshot_stride: usize,
    mut rhs: F,
) -> Result<ModelTrajectory>
where
    F: FnMut(&HyperbolicState) -> Result<(ScalarField, VectorField)>,
{
    if !(dt > 0.0) {
        return Err(Error::InvalidInput(format!("dt must be positive, got {dt}")));
    }
    let nsteps = (t_end / dt - 1e-9).ceil().max(0.0) as usize;
    let mut snapshots = vec![state0.clone()];
    let mut state = state0.clone();
    for step in 0..nsteps {
        let t = state.time;
        let k1 = rhs(&state)?;
        let k2 = rhs(&state.stepped(dt / 2.0, &k1, t + dt / 2.0))?;
        let k3 = rhs(&state.stepped(dt / 2.0, &k2, t + dt / 2.0))?;
        let k4 = rhs(&state.stepped(dt, &k3, t + dt))?;
        let mut zeta = state.zeta.clone();
        let mut v = state.v.clone();
        for (w, k) in [
            (dt / 6.0, &k1),
            (dt / 3.0, &k2),
            (dt / 3.0, &k3),
            (dt / 6.0, &k4),
        ] {
            zeta.axpy(w, &k.0);
            v.axpy(w, &k.1);
        }
        state = HyperbolicState { zeta, v, time: t + dt };
        let max_abs = state.max_abs();
        if !max_abs.is_finite() || max_abs > BLOWUP_THRESHOLD {
            return Err(Error::BlowUp { time: state.time, max_abs });
        }
        let is_last = step + 1 == nsteps;
        if ((step + 1) % snapshot_stride.max(1) == 0 && !is_last) || is_last {
            snapshots.push(state.clone());
        }
    }
    Ok(ModelTrajectory { snapshots, steps: nsteps })
}

/// ∫ζ for model states.
pub fn model_mass(state: &HyperbolicState) -> f64 {
    state.zeta.values.iter().sum::<f64>() * state.zeta.grid.cell_area()
}
