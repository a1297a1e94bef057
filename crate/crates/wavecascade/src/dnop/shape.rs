//! Shape derivative of the Dirichlet-Neumann operator, the surface
//! operator 𝒵, and the Taylor-sign sufficient check.

use super::{dn_apply, DnBackend, DnElliptic, StripGeometry};
use crate::error::Result;
use crate::spectral::ops;
use crate::spectral::ScalarField;

/// 𝒵[εζ]ψ = (𝒢ψ + εμ∇^γζ·∇^γψ) / (1 + ε²μ|∇^γζ|²).
pub fn z_operator(geom: &StripGeometry, psi: &ScalarField, backend: &DnBackend) -> Result<ScalarField> {
    let gpsi = dn_apply(geom, psi, backend)?;
    Ok(z_from_dn(geom, psi, &gpsi))
}

/// Same quantity when 𝒢ψ is already available.
pub fn z_from_dn(geom: &StripGeometry, psi: &ScalarField, gpsi: &ScalarField) -> ScalarField {
    let p = &geom.p;
    let gz = ops::grad_gamma(&geom.zeta, p.gamma);
    let gp = ops::grad_gamma(&psi.zero_mean(), p.gamma);
    let numer = gpsi + &gz.dot(&gp).scale(p.epsilon * p.mu);
    let denom = gz.dot(&gz).scale(p.epsilon * p.epsilon * p.mu).map(|v| 1.0 + v);
    numer.div_field(&denom)
}

/// d𝒢·h = −ε𝒢[εζ](hZ) − εμ∇^γ·(h v) with v = ∇^γψ − εZ∇^γζ.
pub fn dn_shape_derivative(
    geom: &StripGeometry,
    psi: &ScalarField,
    h: &ScalarField,
    backend: &DnBackend,
) -> Result<ScalarField> {
    let p = geom.p;
    let gpsi = dn_apply(geom, psi, backend)?;
    let z = z_from_dn(geom, psi, &gpsi);
    let gz = ops::grad_gamma(&geom.zeta, p.gamma);
    let gp = ops::grad_gamma(&psi.zero_mean(), p.gamma);
    let v = &gp - &gz.mul_scalar(&z.scale(p.epsilon));
    let hz = ops::dealias(&h.mul_field(&z));
    let g_hz = dn_apply(geom, &hz, backend)?;
    let div_hv = ops::div_gamma(&v.mul_scalar(h), p.gamma);
    let mut out = g_hz.scale(-p.epsilon);
    out.axpy(-p.epsilon * p.mu, &ops::dealias(&div_hv));
    Ok(out)
}

/// Result of the Taylor-sign sufficient check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorReport {
    pub passes: bool,
    /// 1 − max over the grid of −ε²βμ·W·ℋ^γ_b W, W = ∇Φ⁰ at the bottom.
    pub hessian_margin: f64,
    /// min(1 + εζ⁰ − βb) − h0.
    pub depth_margin: f64,
}

/// Sufficient conditions for the Taylor sign condition: positive depth
/// margin and −ε²βμ ℋ^γ_b(∇Φ⁰|bottom) ≤ 1 pointwise, with the anisotropic
/// bottom Hessian ℋ^γ_b = [[∂x²b, γ²∂xy²b], [γ²∂xy²b, γ⁴∂y²b]].
///
/// The bottom velocity always comes from the elliptic strip solve; the
/// backend argument only supplies solver settings when it is elliptic.
pub fn taylor_check(
    geom: &StripGeometry,
    psi0: &ScalarField,
    backend: &DnBackend,
) -> Result<TaylorReport> {
    let depth_margin = geom.min_depth() - geom.h0;
    let (nz, cg_tol, cg_maxiter) = match backend {
        DnBackend::Elliptic { nz, cg_tol, cg_maxiter } => (*nz, *cg_tol, *cg_maxiter),
        _ => (24, 1e-10, 500),
    };
    let p = geom.p;
    let grid = &geom.zeta.grid;

    let mut solver = DnElliptic::new(grid, &p, nz, cg_tol, cg_maxiter)?;
    let (_, strip) = solver.apply_with_potential(geom, psi0)?;

    // strip-to-physical chain rule at the bottom level:
    // ∂zΦ = ∂sφ/(1+∂sσ), ∂xΦ = ∂xφ − ∂xσ ∂zΦ (σx = β∂x b at z = −1)
    let n = grid.len();
    let bottom = strip.nz - 1;
    let phi_bottom = ScalarField::from_values(grid, strip.level(bottom).to_vec());
    let phix = ops::dx(&phi_bottom);
    let phiy = ops::dy(&phi_bottom);
    let (dz, nzd) = solver.dz_matrix();
    let mut phis = vec![0.0; n];
    for j in 0..nzd {
        let d = dz[bottom * nzd + j];
        if d == 0.0 {
            continue;
        }
        for (i, v) in phis.iter_mut().enumerate() {
            *v += d * strip.level(j)[i];
        }
    }
    let a = geom.dz_sigma();
    let bx = ops::dx(&geom.b);
    let by = ops::dy(&geom.b);
    let bxx = ops::dx(&bx);
    let bxy = ops::dy(&bx);
    let byy = ops::dy(&by);

    let (g2, g4) = (p.gamma * p.gamma, p.gamma.powi(4));
    let coeff = p.epsilon * p.epsilon * p.beta * p.mu;
    let mut min_form = f64::INFINITY;
    for i in 0..n {
        let dz_phi = phis[i] / (1.0 + a.values[i]);
        let wx = phix.values[i] - p.beta * bx.values[i] * dz_phi;
        let wy = phiy.values[i] - p.beta * by.values[i] * dz_phi;
        let q = wx * wx * bxx.values[i]
            + 2.0 * g2 * wx * wy * bxy.values[i]
            + g4 * wy * wy * byy.values[i];
        min_form = min_form.min(coeff * q);
    }
    let hessian_margin = 1.0 + min_form;
    Ok(TaylorReport {
        passes: depth_margin > 0.0 && hessian_margin > 0.0,
        hessian_margin,
        depth_margin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::RegimeParams;
    use crate::spectral::{PeriodicGrid, VectorField};
    use std::f64::consts::PI;

    #[test]
    fn z_reduces_to_flat_multiplier() {
        let grid = PeriodicGrid::new(32, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let p = RegimeParams::new(0.3, 1.0, 1.0, 0.0).unwrap();
        let geom = StripGeometry::flat(&grid, p);
        let psi = ScalarField::from_fn(&grid, |x, _| x.cos());
        let z = z_operator(&geom, &psi, &DnBackend::elliptic(20)).unwrap();
        let want = ops::g0(&psi, &p);
        assert!((&z - &want).max_abs() < 1e-9);
    }

    #[test]
    fn z_kills_constants_and_denominator_bounded() {
        let grid = PeriodicGrid::new(16, 16, 2.0 * PI, 2.0 * PI).unwrap();
        let p = RegimeParams::new(0.4, 0.8, 0.6, 0.2).unwrap();
        let zeta = ScalarField::from_fn(&grid, |x, y| 0.4 * x.cos() + 0.2 * y.sin());
        let b = ScalarField::from_fn(&grid, |x, _| 0.3 * (x + 1.0).cos());
        let geom = StripGeometry::new(zeta, b, p, 0.1).unwrap();
        let c = ScalarField::constant(&grid, 2.0);
        let z = z_operator(&geom, &c, &DnBackend::elliptic(12)).unwrap();
        assert!(z.max_abs() < 1e-10);

        // denominator 1 + ε²μ|∇^γζ|² ≥ 1
        let gz = ops::grad_gamma(&geom.zeta, p.gamma);
        let den = gz.dot(&gz).scale(p.epsilon * p.epsilon * p.mu).map(|v| 1.0 + v);
        assert!(den.min() >= 1.0);
    }

    #[test]
    fn shape_derivative_linear_in_direction() {
        let grid = PeriodicGrid::new(16, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let p = RegimeParams::new(0.3, 0.7, 1.0, 0.0).unwrap();
        let zeta = ScalarField::from_fn(&grid, |x, _| 0.3 * x.cos());
        let geom = StripGeometry::new(zeta, ScalarField::zeros(&grid), p, 0.1).unwrap();
        let psi = ScalarField::from_fn(&grid, |x, _| x.sin());
        let h1 = ScalarField::from_fn(&grid, |x, y| (x + y).cos());
        let h2 = ScalarField::from_fn(&grid, |_, y| (2.0 * y).sin());
        let backend = DnBackend::elliptic(12);

        let combo = {
            let mut h = h1.scale(0.7);
            h.axpy(1.0, &h2);
            dn_shape_derivative(&geom, &psi, &h, &backend).unwrap()
        };
        let d1 = dn_shape_derivative(&geom, &psi, &h1, &backend).unwrap();
        let d2 = dn_shape_derivative(&geom, &psi, &h2, &backend).unwrap();
        let mut want = d1.scale(0.7);
        want.axpy(1.0, &d2);
        assert!((&combo - &want).max_abs() < 1e-10);

        let zero = dn_shape_derivative(&geom, &psi, &ScalarField::zeros(&grid), &backend).unwrap();
        assert!(zero.max_abs() < 1e-13);
    }

    #[test]
    fn shape_derivative_at_rest_matches_first_taylor_term() {
        // at ζ=0: d𝒢·h = −ε𝒢[0](h 𝒢[0]ψ) − εμ∇^γ·(h ∇^γψ)
        let grid = PeriodicGrid::new(32, 16, 2.0 * PI, 2.0 * PI).unwrap();
        let p = RegimeParams::new(0.25, 0.9, 0.8, 0.0).unwrap();
        let geom = StripGeometry::flat(&grid, p);
        let psi = ScalarField::from_fn(&grid, |x, y| x.sin() + 0.3 * (x + y).cos());
        let h = ScalarField::from_fn(&grid, |x, y| (2.0 * x).cos() + 0.4 * y.sin());
        let got = dn_shape_derivative(&geom, &psi, &h, &DnBackend::elliptic(32)).unwrap();

        let g0psi = ops::g0(&psi, &p);
        let mut want = ops::g0(&ops::dealias(&h.mul_field(&g0psi)), &p).scale(-p.epsilon);
        let gpsi = ops::grad_gamma(&psi, p.gamma);
        want.axpy(
            -p.epsilon * p.mu,
            &ops::dealias(&ops::div_gamma(&gpsi.mul_scalar(&h), p.gamma)),
        );
        assert!((&got - &want).max_abs() < 1e-8);
        let _ = VectorField::zeros(&grid);
    }

    #[test]
    fn taylor_flat_bottom_margin_is_one() {
        let grid = PeriodicGrid::new(16, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let p = RegimeParams::new(1.0, 0.2, 1.0, 0.0).unwrap();
        let zeta = ScalarField::from_fn(&grid, |x, _| 0.3 * x.cos());
        let geom = StripGeometry::new(zeta, ScalarField::zeros(&grid), p, 0.1).unwrap();
        let psi = ScalarField::from_fn(&grid, |x, _| 0.5 * x.sin());
        let rep = taylor_check(&geom, &psi, &DnBackend::elliptic(12)).unwrap();
        assert_eq!(rep.hessian_margin, 1.0);
        assert!(rep.depth_margin > 0.0);
        assert!(rep.passes);
    }

    #[test]
    fn taylor_rest_state_margin_is_one() {
        let grid = PeriodicGrid::new(16, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let p = RegimeParams::new(1.0, 0.2, 1.0, 1.0).unwrap();
        let b = ScalarField::from_fn(&grid, |x, _| 0.3 * x.cos());
        let geom = StripGeometry::new(ScalarField::zeros(&grid), b, p, 0.1).unwrap();
        let rep = taylor_check(&geom, &ScalarField::zeros(&grid), &DnBackend::elliptic(12)).unwrap();
        assert!((rep.hessian_margin - 1.0).abs() < 1e-12);
        assert!(rep.passes);
    }
}
