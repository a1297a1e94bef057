//! The Dirichlet-Neumann operator 𝒢_{μ,γ}[εζ, βb] and its expansions.
//!
//! Three independent routes compute the same operator:
//! an elliptic solve on the straightened strip (exact up to solver
//! tolerance), the shallow-water expansion (first and second order in μ),
//! and the small-amplitude expansion in the surface elevation (order n).
//! The module also provides the shape derivative of the operator, the
//! surface operator 𝒵, and the Taylor-sign sufficient check built on the
//! anisotropic bottom Hessian.

mod elliptic;
mod expand;
mod shape;
mod strip;

pub use elliptic::{DnElliptic, StripField};
pub use expand::{dn_shallow1, dn_shallow2, dn_small_amplitude, t_operator};
pub use shape::{dn_shape_derivative, taylor_check, z_from_dn, z_operator, TaylorReport};
pub use strip::{coercivity_constant, q_matrix, sigma_map, QMatrixField, StripGeometry};

use crate::error::Result;
use crate::spectral::ScalarField;

/// Backend selection for `dn_apply`.
#[derive(Debug, Clone, PartialEq)]
pub enum DnBackend {
    Elliptic {
        nz: usize,
        cg_tol: f64,
        cg_maxiter: usize,
    },
    Shallow1,
    Shallow2,
    SmallAmplitude {
        order: usize,
    },
}

impl DnBackend {
    pub fn elliptic(nz: usize) -> Self {
        DnBackend::Elliptic {
            nz,
            cg_tol: 1e-10,
            cg_maxiter: 500,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DnBackend::Elliptic { nz, cg_tol, cg_maxiter } => {
                if *nz < 8 {
                    return Err(crate::Error::InvalidInput(format!(
                        "elliptic backend needs nz ≥ 8, got {nz}"
                    )));
                }
                if !(*cg_tol > 0.0 && *cg_tol <= 1e-4) {
                    return Err(crate::Error::InvalidInput(format!(
                        "cg_tol must lie in (0, 1e-4], got {cg_tol}"
                    )));
                }
                if *cg_maxiter == 0 {
                    return Err(crate::Error::InvalidInput("cg_maxiter must be positive".into()));
                }
            }
            DnBackend::SmallAmplitude { order } => {
                if !(1..=8).contains(order) {
                    return Err(crate::Error::UnsupportedRegime(format!(
                        "small-amplitude order must lie in [1,8], got {order}"
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

impl Default for DnBackend {
    fn default() -> Self {
        DnBackend::elliptic(24)
    }
}

/// Apply the Dirichlet-Neumann operator through the selected backend.
/// The zero mode of ψ is projected out first; constants lie in the kernel.
pub fn dn_apply(geom: &StripGeometry, psi: &ScalarField, backend: &DnBackend) -> Result<ScalarField> {
    backend.validate()?;
    match backend {
        DnBackend::Elliptic { nz, cg_tol, cg_maxiter } => {
            let mut solver = DnElliptic::new(&psi.grid, &geom.p, *nz, *cg_tol, *cg_maxiter)?;
            solver.apply(geom, psi)
        }
        DnBackend::Shallow1 => dn_shallow1(geom, psi),
        DnBackend::Shallow2 => dn_shallow2(geom, psi),
        DnBackend::SmallAmplitude { order } => dn_small_amplitude(geom, psi, *order),
    }
}
