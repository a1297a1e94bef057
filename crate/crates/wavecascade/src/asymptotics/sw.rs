//! Shallow-water system
//!   ∂t V + ∇ζ + ½∇|V|² = 0,
//!   ∂t ζ + ∇·((1 + ζ − b)V) = 0.

use super::{rk4_drive, HyperbolicState, ModelTrajectory};
use crate::error::{Error, Result};
use crate::spectral::{ops, ScalarField, VectorField};

pub struct ShallowWater {
    pub b: ScalarField,
    pub dealias: bool,
}

impl ShallowWater {
    pub fn new(b: ScalarField, dealias: bool) -> Self {
        Self { b, dealias }
    }

    pub fn rhs(&self, state: &HyperbolicState) -> Result<(ScalarField, VectorField)> {
        let clean = self.dealias;
        let mut depth = ScalarField::constant(&state.zeta.grid, 1.0);
        depth.axpy(1.0, &state.zeta);
        depth.axpy(-1.0, &self.b);
        if depth.min() <= 0.0 {
            return Err(Error::DegenerateGeometry {
                min_depth: depth.min(),
                h0: 0.0,
                time: Some(state.time),
            });
        }
        let flux = VectorField::new(
            ops::prod(&depth, &state.v.x, clean),
            ops::prod(&depth, &state.v.y, clean),
        );
        let dzeta = -&ops::div(&flux);
        let speed2 = {
            let mut s = ops::prod(&state.v.x, &state.v.x, clean);
            s.axpy(1.0, &ops::prod(&state.v.y, &state.v.y, clean));
            s
        };
        let mut dv = ops::grad(&state.zeta).scale(-1.0);
        dv.axpy(-0.5, &ops::grad(&speed2));
        Ok((dzeta, dv))
    }
}

pub fn sw_integrate(
    state0: &HyperbolicState,
    b: &ScalarField,
    t_end: f64,
    dt: f64,
    snapshot_stride: usize,
) -> Result<ModelTrajectory> {
    let sys = ShallowWater::new(b.clone(), true);
    rk4_drive(state0, t_end, dt, snapshot_stride, |s| sys.rhs(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::model_mass;
    use crate::spectral::PeriodicGrid;
    use std::f64::consts::PI;

    #[test]
    fn rest_is_invariant() {
        let g = PeriodicGrid::new(16, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let traj = sw_integrate(
            &HyperbolicState::rest(&g),
            &ScalarField::zeros(&g),
            1.0,
            0.1,
            usize::MAX,
        )
        .unwrap();
        assert_eq!(traj.last().max_abs(), 0.0);
    }

    #[test]
    fn linear_waves_have_unit_speed() {
        // amplitude-1e-6 single mode: ω = |k|, so after t = 2π/k the wave
        // returns to its initial shape
        let g = PeriodicGrid::new(64, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let amp = 1e-6;
        let k = 1.0;
        let zeta0 = ScalarField::from_fn(&g, |x, _| amp * (k * x).cos());
        // right-moving characteristic: V = ζ for ω = k
        let v0 = VectorField::new(zeta0.clone(), ScalarField::zeros(&g));
        let state0 = HyperbolicState::new(zeta0.clone(), v0, 0.0);
        let period = 2.0 * PI / k;
        let traj = sw_integrate(&state0, &ScalarField::zeros(&g), period, period / 400.0, usize::MAX).unwrap();
        let err = (&traj.last().zeta - &zeta0).max_abs() / amp;
        assert!(err < 1e-5, "relative shape error {err:.3e}");
    }

    #[test]
    fn mass_conserved_and_depth_guarded() {
        let g = PeriodicGrid::new(32, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let zeta0 = ScalarField::from_fn(&g, |x, _| 0.2 * x.cos());
        let state0 = HyperbolicState::new(zeta0, VectorField::zeros(&g), 0.0);
        let b = ScalarField::zeros(&g);
        let traj = sw_integrate(&state0, &b, 0.5, 0.01, usize::MAX).unwrap();
        let drift = (model_mass(traj.last()) - model_mass(&traj.snapshots[0])).abs();
        assert!(drift < 1e-12);

        let deep = ScalarField::from_fn(&g, |x, _| -1.5 + 0.1 * x.cos());
        let bad = HyperbolicState::new(deep, VectorField::zeros(&g), 0.0);
        assert!(matches!(
            sw_integrate(&bad, &b, 0.1, 0.01, usize::MAX),
            Err(Error::DegenerateGeometry { .. })
        ));
    }
}
