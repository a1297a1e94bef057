//! Symmetric Boussinesq family with coefficients driven by (θ, p₁, p₂):
//!
//!   (1 − εa₄Δ)∂t V + ∇ζ + ε(¼∇|V|² + ½(V·∇)V + ½V∇·V
//!                           + ¼∇ζ² − ½b∇ζ + a₃Δ∇ζ) = 0,
//!   (1 − εa₂Δ)∂t ζ + ∇·V + ε(½∇·((ζ − b)V) + a₁Δ∇·V) = 0,
//!
//! with a₁ = (θ²/2 − 1/6)p₁, a₂ = (θ²/2 − 1/6)(1 − p₁),
//! a₃ = ((1 − θ²)/2)p₂, a₄ = ((1 − θ²)/2)(1 − p₂), so that
//! a₁ + a₂ + a₃ + a₄ = 1/3. The ζ-equation carries the (θ²/2 − 1/6) pair
//! and the V-equation the ((1 − θ²)/2) pair, which is the placement under
//! which the family is consistent with the long-wave expansion through the
//! velocity maps below; a₁ = a₃ gives the completely symmetric members and
//! evolution requires a₂ ≥ 0 and a₄ ≥ 0.
//!
//! Velocity maps:
//!   initial        V⁰ = (1 + (ε/2)(ζ⁰ − b)) (1 − (ε/2)(1 − θ²)Δ)^{-1} ∇ψ⁰,
//!   reconstruction V_app = (1 − (ε/2)(1 − θ²)Δ) [(1 − (ε/2)(ζ − b)) V].

use super::{rk4_drive, HyperbolicState, ModelTrajectory};
use crate::error::{Error, Result};
use crate::spectral::{ops, ScalarField, VectorField};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoussinesqCoeffs {
    pub theta: f64,
    pub p1: f64,
    pub p2: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
}

impl BoussinesqCoeffs {
    pub fn new(theta: f64, p1: f64, p2: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::InvalidInput(format!("θ must lie in [0,1], got {theta}")));
        }
        let c12 = theta * theta / 2.0 - 1.0 / 6.0;
        let c34 = (1.0 - theta * theta) / 2.0;
        Ok(Self {
            theta,
            p1,
            p2,
            a1: c12 * p1,
            a2: c12 * (1.0 - p1),
            a3: c34 * p2,
            a4: c34 * (1.0 - p2),
        })
    }

    /// Sign constraint for the smoothing operators.
    pub fn validate_for_evolution(&self) -> Result<()> {
        if self.a2 < 0.0 || self.a4 < 0.0 {
            return Err(Error::InvalidInput(format!(
                "evolution requires a2 ≥ 0 and a4 ≥ 0, got a2 = {}, a4 = {}",
                self.a2, self.a4
            )));
        }
        Ok(())
    }

    /// Members without smoothing on one equation integrate but deserve a
    /// stability note.
    pub fn stability_warning(&self) -> Option<String> {
        if self.a2 == 0.0 || self.a4 == 0.0 {
            Some(format!(
                "boussinesq member without smoothing (a2 = {}, a4 = {}): high-wavenumber \
                 stability depends on the grid cutoff",
                self.a2, self.a4
            ))
        } else {
            None
        }
    }
}

pub struct BoussinesqSystem {
    pub b: ScalarField,
    pub eps: f64,
    pub coeffs: BoussinesqCoeffs,
    pub dealias: bool,
}

impl BoussinesqSystem {
    pub fn new(b: ScalarField, eps: f64, coeffs: BoussinesqCoeffs) -> Result<Self> {
        coeffs.validate_for_evolution()?;
        Ok(Self {
            b,
            eps,
            coeffs,
            dealias: true,
        })
    }

    pub fn rhs(&self, state: &HyperbolicState) -> Result<(ScalarField, VectorField)> {
        let clean = self.dealias;
        let (eps, a) = (self.eps, &self.coeffs);
        let v = &state.v;
        let zeta = &state.zeta;

        // ζ-equation
        let zmb = zeta - &self.b;
        let flux = VectorField::new(ops::prod(&zmb, &v.x, clean), ops::prod(&zmb, &v.y, clean));
        let mut dzeta_raw = ops::div(v);
        dzeta_raw.axpy(0.5 * eps, &ops::div(&flux));
        dzeta_raw.axpy(eps * a.a1, &ops::laplacian(&ops::div(v)));
        let dzeta = ops::helmholtz_inverse(&dzeta_raw.scale(-1.0), eps * a.a2);

        // V-equation
        let speed2 = {
            let mut s = ops::prod(&v.x, &v.x, clean);
            s.axpy(1.0, &ops::prod(&v.y, &v.y, clean));
            s
        };
        let gvx = ops::grad(&v.x);
        let gvy = ops::grad(&v.y);
        let adv = VectorField::new(
            {
                let mut s = ops::prod(&v.x, &gvx.x, clean);
                s.axpy(1.0, &ops::prod(&v.y, &gvx.y, clean));
                s
            },
            {
                let mut s = ops::prod(&v.x, &gvy.x, clean);
                s.axpy(1.0, &ops::prod(&v.y, &gvy.y, clean));
                s
            },
        );
        let div_v = ops::div(v);
        let vdiv = VectorField::new(ops::prod(&v.x, &div_v, clean), ops::prod(&v.y, &div_v, clean));
        let gz = ops::grad(zeta);

        let mut dv_raw = gz.clone();
        dv_raw.axpy(0.25 * eps, &ops::grad(&speed2));
        dv_raw.axpy(0.5 * eps, &adv);
        dv_raw.axpy(0.5 * eps, &vdiv);
        dv_raw.axpy(0.25 * eps, &ops::grad(&ops::prod(zeta, zeta, clean)));
        dv_raw.axpy(-0.5 * eps, &gz.mul_scalar(&self.b));
        dv_raw.axpy(eps * a.a3, &VectorField::new(ops::laplacian(&gz.x), ops::laplacian(&gz.y)));
        let c4 = eps * a.a4;
        let dv = VectorField::new(
            ops::helmholtz_inverse(&dv_raw.x.scale(-1.0), c4),
            ops::helmholtz_inverse(&dv_raw.y.scale(-1.0), c4),
        );
        Ok((dzeta, dv))
    }
}

/// Initial data map: ζ⁰ kept, V⁰ = (1 + (ε/2)(ζ⁰ − b))(1 − (ε/2)(1−θ²)Δ)^{-1}∇ψ⁰.
pub fn boussinesq_initial(
    zeta0: &ScalarField,
    psi0: &ScalarField,
    b: &ScalarField,
    eps: f64,
    theta: f64,
) -> Result<HyperbolicState> {
    let c = 0.5 * eps * (1.0 - theta * theta);
    if c < 0.0 {
        return Err(Error::Config(format!(
            "smoothing multiplier 1 + {c}|ξ|² is not invertible"
        )));
    }
    let gpsi = ops::grad(&psi0.zero_mean());
    let smoothed = VectorField::new(ops::helmholtz_inverse(&gpsi.x, c), ops::helmholtz_inverse(&gpsi.y, c));
    let mut amp = ScalarField::constant(&zeta0.grid, 1.0);
    amp.axpy(0.5 * eps, zeta0);
    amp.axpy(-0.5 * eps, b);
    Ok(HyperbolicState::new(zeta0.clone(), smoothed.mul_scalar(&amp), 0.0))
}

/// Reconstruction map pairing with `boussinesq_initial`:
/// (ζ, (1 − (ε/2)(1−θ²)Δ)[(1 − (ε/2)(ζ − b))V]).
pub fn boussinesq_reconstruct(
    state: &HyperbolicState,
    b: &ScalarField,
    eps: f64,
    theta: f64,
) -> (ScalarField, VectorField) {
    let c = 0.5 * eps * (1.0 - theta * theta);
    let mut amp = ScalarField::constant(&state.zeta.grid, 1.0);
    amp.axpy(-0.5 * eps, &state.zeta);
    amp.axpy(0.5 * eps, b);
    let prod = state.v.mul_scalar(&amp);
    let v = VectorField::new(ops::helmholtz(&prod.x, c), ops::helmholtz(&prod.y, c));
    (state.zeta.clone(), v)
}

pub fn boussinesq_integrate(
    state0: &HyperbolicState,
    b: &ScalarField,
    coeffs: &BoussinesqCoeffs,
    eps: f64,
    t_end: f64,
    dt: f64,
    snapshot_stride: usize,
) -> Result<ModelTrajectory> {
    let sys = BoussinesqSystem::new(b.clone(), eps, *coeffs)?;
    rk4_drive(state0, t_end, dt, snapshot_stride, |s| sys.rhs(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::PeriodicGrid;
    use std::f64::consts::PI;

    #[test]
    fn coefficient_relations() {
        // the (θ=1, p1=1, p2=0) member collapses onto a = (1/3, 0, 0, 0)
        let c = BoussinesqCoeffs::new(1.0, 1.0, 0.0).unwrap();
        assert!((c.a1 - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!((c.a2, c.a3, c.a4), (0.0, 0.0, 0.0));
        assert!(c.stability_warning().is_some());

        for (theta, p1, p2) in [(0.9, 0.3, 0.7), (0.5, -1.0, 2.0), (0.0, 0.25, 0.5)] {
            let c = BoussinesqCoeffs::new(theta, p1, p2).unwrap();
            assert!(
                (c.a1 + c.a2 + c.a3 + c.a4 - 1.0 / 3.0).abs() < 1e-15,
                "sum rule violated"
            );
        }
    }

    #[test]
    fn evolution_sign_constraint() {
        // θ² < 1/3 with p1 < 1 makes a2 < 0
        let c = BoussinesqCoeffs::new(0.1, 0.0, 0.5).unwrap();
        assert!(c.validate_for_evolution().is_err());
        assert!(BoussinesqSystem::new(
            ScalarField::zeros(&PeriodicGrid::new(8, 8, 1.0, 1.0).unwrap()),
            0.1,
            c
        )
        .is_err());
    }

    #[test]
    fn rest_is_invariant() {
        let g = PeriodicGrid::new(16, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let coeffs = BoussinesqCoeffs::new((2.0f64 / 3.0).sqrt(), 0.0, 0.0).unwrap();
        let traj = boussinesq_integrate(
            &HyperbolicState::rest(&g),
            &ScalarField::zeros(&g),
            &coeffs,
            0.1,
            1.0,
            0.05,
            usize::MAX,
        )
        .unwrap();
        assert_eq!(traj.last().max_abs(), 0.0);
    }

    #[test]
    fn initial_map_limits() {
        let g = PeriodicGrid::new(32, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let zeta0 = ScalarField::from_fn(&g, |x, _| 0.3 * x.cos());
        let psi0 = ScalarField::from_fn(&g, |x, _| x.sin());
        let b = ScalarField::zeros(&g);

        // θ = 1: multiplier is the identity
        let st = boussinesq_initial(&zeta0, &psi0, &b, 0.2, 1.0).unwrap();
        let gp = ops::grad(&psi0);
        let mut amp = ScalarField::constant(&g, 1.0);
        amp.axpy(0.1, &zeta0);
        let want = gp.mul_scalar(&amp);
        assert!((&st.v.x - &want.x).max_abs() < 1e-12);

        // ε → 0: identity map
        let st = boussinesq_initial(&zeta0, &psi0, &b, 1e-12, 0.5).unwrap();
        assert!((&st.v.x - &gp.x).max_abs() < 1e-9);
        assert!((&st.zeta - &zeta0).max_abs() == 0.0);

        // single-mode closed form: (1 − c Δ)^{-1}∇ψ on cos(kx)
        let eps = 0.3;
        let theta = 0.5;
        let c = 0.5 * eps * (1.0 - theta * theta);
        let st = boussinesq_initial(&ScalarField::zeros(&g), &psi0, &b, eps, theta).unwrap();
        let want = gp.scale(1.0 / (1.0 + c));
        assert!((&st.v.x - &want.x).max_abs() < 1e-12);
    }

    #[test]
    fn reconstruction_inverts_initial_to_eps_squared() {
        let g = PeriodicGrid::new(32, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let zeta0 = ScalarField::from_fn(&g, |x, _| 0.4 * x.cos());
        let psi0 = ScalarField::from_fn(&g, |x, _| x.sin() + 0.3 * (2.0 * x).cos());
        let b = ScalarField::from_fn(&g, |x, _| 0.2 * (x + 1.0).cos());
        let eps = 0.05;
        let theta = 0.6;
        let st = boussinesq_initial(&zeta0, &psi0, &b, eps, theta).unwrap();
        let (_, v) = boussinesq_reconstruct(&st, &b, eps, theta);
        let gp = ops::grad(&psi0.zero_mean());
        let err = (&v.x - &gp.x).max_abs();
        assert!(err < eps * eps, "round trip error {err:.3e} not O(ε²)");
    }
}
