//! Full-dispersion (deep-water) model over a flat bottom, with the exact
//! linear dispersion of the strip kept through the multiplier 𝒯_μ:
//!
//!   ∂t ζ = 𝒯_μ V − ε̃(𝒯_μ(ζ∇𝒯_μV) + ∇·(ζV)),
//!   ∂t V = −∇ζ − ε̃(½∇|V|² − ∇ζ·𝒯_μ∇ζ),       ε̃ = ε√μ.

use super::{rk4_drive, HyperbolicState, ModelTrajectory};
use crate::error::{Error, Result};
use crate::params::RegimeParams;
use crate::spectral::{ops, ScalarField, VectorField};

pub struct FullDispersion {
    pub eps_tilde: f64,
    pub mu: f64,
    pub dealias: bool,
}

impl FullDispersion {
    pub fn new(p: &RegimeParams) -> Result<Self> {
        if (p.gamma - 1.0).abs() > 1e-14 {
            return Err(Error::UnsupportedRegime(format!(
                "the full-dispersion model is stated for γ = 1, got {}",
                p.gamma
            )));
        }
        if p.beta != 0.0 {
            return Err(Error::UnsupportedRegime(
                "the full-dispersion model requires a flat bottom (β = 0)".into(),
            ));
        }
        if p.mu < 1.0 {
            return Err(Error::UnsupportedRegime(format!(
                "the full-dispersion model is a deep-water model (μ ≥ 1), got μ = {}",
                p.mu
            )));
        }
        Ok(Self {
            eps_tilde: p.steepness(),
            mu: p.mu,
            dealias: true,
        })
    }

    pub fn rhs(&self, state: &HyperbolicState) -> Result<(ScalarField, VectorField)> {
        let clean = self.dealias;
        let (et, mu) = (self.eps_tilde, self.mu);
        let v = &state.v;
        let zeta = &state.zeta;

        let tv = ops::t_mu(v, mu);
        let mut dzeta = tv.clone();
        {
            let gtv = ops::grad(&tv);
            let inner = VectorField::new(ops::prod(zeta, &gtv.x, clean), ops::prod(zeta, &gtv.y, clean));
            dzeta.axpy(-et, &ops::t_mu(&inner, mu));
            let flux = VectorField::new(ops::prod(zeta, &v.x, clean), ops::prod(zeta, &v.y, clean));
            dzeta.axpy(-et, &ops::div(&flux));
        }

        let gz = ops::grad(zeta);
        let mut dv = gz.scale(-1.0);
        {
            let speed2 = {
                let mut s = ops::prod(&v.x, &v.x, clean);
                s.axpy(1.0, &ops::prod(&v.y, &v.y, clean));
                s
            };
            dv.axpy(-0.5 * et, &ops::grad(&speed2));
            let tgz = ops::t_mu(&gz, mu);
            dv.axpy(
                et,
                &VectorField::new(ops::prod(&gz.x, &tgz, clean), ops::prod(&gz.y, &tgz, clean)),
            );
        }
        Ok((dzeta, dv))
    }
}

/// Initial velocity (ζ⁰, ∇ψ⁰ − ε̃(𝒯_μ∇ψ⁰)∇ζ⁰).
pub fn fd_initial(zeta0: &ScalarField, psi0: &ScalarField, p: &RegimeParams) -> HyperbolicState {
    let gpsi = ops::grad(&psi0.zero_mean());
    let t = ops::t_mu(&gpsi, p.mu);
    let gz = ops::grad(zeta0);
    let mut v = gpsi;
    v.axpy(-p.steepness(), &gz.mul_scalar(&t));
    HyperbolicState::new(zeta0.clone(), v, 0.0)
}

pub fn fd_integrate(
    state0: &HyperbolicState,
    p: &RegimeParams,
    t_end: f64,
    dt: f64,
    snapshot_stride: usize,
) -> Result<ModelTrajectory> {
    let sys = FullDispersion::new(p)?;
    rk4_drive(state0, t_end, dt, snapshot_stride, |s| sys.rhs(s))
}
