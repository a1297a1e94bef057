//! Asymptotic expansions of the Dirichlet-Neumann operator.
//!
//! Shallow water (μ → 0, γ = 1):
//!   first order   −μ∇·(h∇ψ),
//!   second order  −μ∇·(h∇ψ) + μ²∇·(𝒯[h, βb]∇ψ),
//! with h = 1 + εζ − βb and the first-order operator
//!   𝒯[h,b]V = −⅓∇(h³∇·V) + ½[∇(h²∇b·V) − h²∇b ∇·V] + h∇b(∇b·V).
//!
//! Small amplitude (ε → 0, flat bottom): Taylor terms in the surface
//! elevation generated by iterating the shape-derivative formula at ζ = 0;
//! order 1 reproduces
//!   𝒢[0]ψ − ε𝒢[0](ζ𝒢[0]ψ) − εμ∇^γ·(ζ∇^γψ).
//! Higher orders follow the same recursion instead of hand-derived
//! formulas, which keeps every order consistent with the first derivative.

use super::strip::StripGeometry;
use crate::error::{Error, Result};
use crate::spectral::ops;
use crate::spectral::{ScalarField, VectorField};

/// 𝒯[h,b]v (plain gradients, γ = 1). Products are formed pointwise so the
/// operator is exactly self-adjoint for the grid inner product.
pub fn t_operator(h: &ScalarField, b: &ScalarField, v: &VectorField) -> VectorField {
    debug_assert!(h.min() > 0.0);
    let grad_b = ops::grad(b);
    let div_v = ops::div(v);
    let h2 = h.mul_field(h);
    let h3 = h2.mul_field(h);
    let gb_dot_v = grad_b.dot(v);

    // −⅓∇(h³∇·v)
    let t1 = ops::grad(&h3.mul_field(&div_v)).scale(-1.0 / 3.0);
    // ½[∇(h²∇b·v) − h²∇b ∇·v]
    let t2a = ops::grad(&h2.mul_field(&gb_dot_v));
    let t2b = grad_b.mul_scalar(&h2.mul_field(&div_v));
    // h∇b(∇b·v)
    let t3 = grad_b.mul_scalar(&h.mul_field(&gb_dot_v));

    let mut out = t1;
    out.axpy(0.5, &t2a);
    out.axpy(-0.5, &t2b);
    out.axpy(1.0, &t3);
    out
}

fn require_gamma_one(geom: &StripGeometry, what: &str) -> Result<()> {
    if (geom.p.gamma - 1.0).abs() > 1e-14 {
        return Err(Error::UnsupportedRegime(format!(
            "{what} is stated for γ = 1, got γ = {}",
            geom.p.gamma
        )));
    }
    Ok(())
}

/// First-order shallow-water expansion −μ∇·(h∇ψ).
pub fn dn_shallow1(geom: &StripGeometry, psi: &ScalarField) -> Result<ScalarField> {
    require_gamma_one(geom, "the shallow-water expansion")?;
    let psi = psi.zero_mean();
    let h = geom.depth();
    let g = ops::grad(&psi);
    Ok(ops::div(&g.mul_scalar(&h)).scale(-geom.p.mu))
}

/// Second-order shallow-water expansion −μ∇·(h∇ψ) + μ²∇·(𝒯[h, βb]∇ψ).
pub fn dn_shallow2(geom: &StripGeometry, psi: &ScalarField) -> Result<ScalarField> {
    require_gamma_one(geom, "the shallow-water expansion")?;
    let psi = psi.zero_mean();
    let h = geom.depth();
    let g = ops::grad(&psi);
    let first = ops::div(&g.mul_scalar(&h)).scale(-geom.p.mu);
    let bb = geom.b.scale(geom.p.beta);
    let t = t_operator(&h, &bb, &g);
    Ok(&first + &ops::div(&t).scale(geom.p.mu * geom.p.mu))
}

/// Small-amplitude expansion of order n (flat bottom).
///
/// Returns Σ_{j=0}^n G_j ψ where 𝒢[ετζ]ψ = Σ_j τ^j G_j ψ is the Taylor
/// series generated by the shape-derivative recursion at the flat state.
pub fn dn_small_amplitude(geom: &StripGeometry, psi: &ScalarField, order: usize) -> Result<ScalarField> {
    if !(1..=8).contains(&order) {
        return Err(Error::UnsupportedRegime(format!(
            "small-amplitude order must lie in [1,8], got {order}"
        )));
    }
    if geom.p.beta != 0.0 && geom.b.max_abs() > 0.0 {
        return Err(Error::UnsupportedRegime(
            "the small-amplitude backend requires a flat bottom; use the elliptic backend for β ≠ 0"
                .into(),
        ));
    }
    let psi = psi.zero_mean();
    let ctx = TaylorCtx::new(geom);
    let terms = ctx.taylor_terms(order, &psi);
    let mut out = ScalarField::zeros(&psi.grid);
    for t in &terms {
        out.axpy(1.0, t);
    }
    Ok(out)
}

/// Shared state for the Taylor recursion: the elevation, its anisotropic
/// gradient, and the coefficient of the quadratic denominator.
struct TaylorCtx {
    p: crate::params::RegimeParams,
    zeta: ScalarField,
    gz: VectorField,
    /// ε²μ|∇^γζ|²
    c: ScalarField,
}

impl TaylorCtx {
    fn new(geom: &StripGeometry) -> Self {
        let p = geom.p;
        let gz = ops::grad_gamma(&geom.zeta, p.gamma);
        let c = gz.dot(&gz).scale(p.epsilon * p.epsilon * p.mu);
        Self {
            p,
            zeta: geom.zeta.clone(),
            gz,
            c,
        }
    }

    /// [G_0 u, …, G_n u]: Taylor coefficients of τ ↦ 𝒢[ετζ]u at τ = 0.
    ///
    /// Differentiating the shape-derivative formula once more in τ yields
    /// the triangular recursion
    ///   (j+1) G_{j+1} u = −ε Σ_{k+l=j} G_k(ζ Z_l) − εμ ∇^γ·(ζ v_j),
    /// where Z(τ) = (G(τ)u + ετμ∇^γζ·∇^γu)/(1+ε²τ²μ|∇^γζ|²) and
    /// v(τ) = ∇^γu − ετ Z(τ)∇^γζ are expanded as series in τ.
    fn taylor_terms(&self, n: usize, u: &ScalarField) -> Vec<ScalarField> {
        let (eps, mu, gamma) = (self.p.epsilon, self.p.mu, self.p.gamma);
        let gu = ops::grad_gamma(u, gamma);
        let cross = self.gz.dot(&gu).scale(eps * mu);
        let mut terms: Vec<ScalarField> = vec![ops::g0(u, &self.p)];
        for j in 0..n {
            // A_i: series coefficients of G(τ)u + ετμ∇^γζ·∇^γu
            // Z_l = Σ_{i+2m=l} (−c)^m A_i
            let mut z_coeffs: Vec<ScalarField> = Vec::with_capacity(j + 1);
            for l in 0..=j {
                let mut z = ScalarField::zeros(&u.grid);
                let mut cpow = ScalarField::constant(&u.grid, 1.0);
                for m in 0..=(l / 2) {
                    let i = l - 2 * m;
                    let mut a_i = terms[i].clone();
                    if i == 1 {
                        a_i.axpy(1.0, &cross);
                    }
                    z.axpy(1.0, &cpow.mul_field(&a_i));
                    cpow = cpow.mul_field(&self.c.scale(-1.0));
                }
                z_coeffs.push(z);
            }
            let v_j = if j == 0 {
                gu.clone()
            } else {
                self.gz.mul_scalar(&z_coeffs[j - 1].scale(-eps))
            };
            let mut sum = ScalarField::zeros(&u.grid);
            for k in 0..=j {
                let l = j - k;
                let w = ops::dealias(&self.zeta.mul_field(&z_coeffs[l]));
                let gk = self.taylor_terms(k, &w);
                sum.axpy(1.0, &gk[k]);
            }
            let div_term = ops::div_gamma(&v_j.mul_scalar(&self.zeta), gamma);
            let mut next = sum.scale(-eps);
            next.axpy(-eps * mu, &ops::dealias(&div_term));
            terms.push(next.scale(1.0 / (j + 1) as f64));
        }
        terms
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dnop::strip::StripGeometry;
    use crate::params::RegimeParams;
    use crate::spectral::PeriodicGrid;
    use std::f64::consts::PI;

    #[test]
    fn shallow_orders_on_flat_single_mode() {
        // h = 1, ψ = cos(kx): first order μk², second order μk² − μ²k⁴/3,
        // the Taylor coefficients of √μ k tanh(√μ k)
        let grid = PeriodicGrid::new(32, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let k = 2.0;
        let psi = ScalarField::from_fn(&grid, |x, _| (k * x).cos());
        for mu in [0.3, 0.05] {
            let p = RegimeParams::new(1.0, mu, 1.0, 0.0).unwrap();
            let geom = StripGeometry::flat(&grid, p);
            let s1 = dn_shallow1(&geom, &psi).unwrap();
            let w1 = psi.scale(mu * k * k);
            assert!((&s1 - &w1).max_abs() < 1e-11);
            let s2 = dn_shallow2(&geom, &psi).unwrap();
            let w2 = psi.scale(mu * k * k - mu * mu * k.powi(4) / 3.0);
            assert!((&s2 - &w2).max_abs() < 1e-11);
        }
    }

    #[test]
    fn shallow_constants_vanish() {
        let grid = PeriodicGrid::new(16, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let p = RegimeParams::new(1.0, 0.1, 1.0, 1.0).unwrap();
        let zeta = ScalarField::from_fn(&grid, |x, _| 0.2 * x.cos());
        let b = ScalarField::from_fn(&grid, |_, y| 0.1 * y.sin());
        let geom = StripGeometry::new(zeta, b, p, 0.1).unwrap();
        let c = ScalarField::constant(&grid, 3.0);
        assert!(dn_shallow1(&geom, &c).unwrap().max_abs() < 1e-13);
        assert!(dn_shallow2(&geom, &c).unwrap().max_abs() < 1e-13);
    }

    #[test]
    fn shallow_rejects_anisotropy() {
        let grid = PeriodicGrid::new(16, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let p = RegimeParams::new(1.0, 0.1, 0.5, 0.0).unwrap();
        let geom = StripGeometry::flat(&grid, p);
        let psi = ScalarField::from_fn(&grid, |x, _| x.cos());
        assert!(matches!(
            dn_shallow1(&geom, &psi),
            Err(Error::UnsupportedRegime(_))
        ));
    }

    #[test]
    fn t_operator_single_mode_and_constants() {
        let grid = PeriodicGrid::new(32, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let h = ScalarField::constant(&grid, 1.0);
        let b = ScalarField::zeros(&grid);
        let k = 3.0;
        let psi = ScalarField::from_fn(&grid, |x, _| (k * x).cos());
        let v = ops::grad(&psi);
        // 𝒯[1,0]∇cos(kx) = (k²/3)∇cos(kx)
        let t = t_operator(&h, &b, &v);
        let want = v.scale(k * k / 3.0);
        assert!((&t.x - &want.x).max_abs() < 1e-10);
        assert!((&t.y - &want.y).max_abs() < 1e-10);

        let cv = VectorField::new(ScalarField::constant(&grid, 2.0), ScalarField::constant(&grid, -1.0));
        let t = t_operator(&h, &b, &cv);
        assert!(t.max_abs() < 1e-13);
    }

    #[test]
    fn t_operator_self_adjoint_on_grid() {
        let grid = PeriodicGrid::new(16, 16, 2.0 * PI, 2.0 * PI).unwrap();
        let h = ScalarField::from_fn(&grid, |x, y| 1.0 + 0.3 * x.cos() + 0.2 * (x + y).sin());
        let b = ScalarField::from_fn(&grid, |x, y| 0.4 * (y - 0.3).cos() + 0.1 * (2.0 * x).sin());
        let u = VectorField::new(
            ScalarField::from_fn(&grid, |x, y| (x + y).cos()),
            ScalarField::from_fn(&grid, |x, _| (2.0 * x).sin()),
        );
        let v = VectorField::new(
            ScalarField::from_fn(&grid, |_, y| (3.0 * y).cos()),
            ScalarField::from_fn(&grid, |x, y| x.sin() * y.cos()),
        );
        let tu = t_operator(&h, &b, &u);
        let tv = t_operator(&h, &b, &v);
        let ip = |a: &VectorField, c: &VectorField| ops::inner(&a.x, &c.x) + ops::inner(&a.y, &c.y);
        let defect = (ip(&tu, &v) - ip(&u, &tv)).abs();
        assert!(defect < 1e-10 * (1.0 + ip(&u, &u).abs()), "defect {defect:.3e}");
    }

    #[test]
    fn small_amplitude_reduces_to_flat_multiplier() {
        let grid = PeriodicGrid::new(32, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let p = RegimeParams::new(0.2, 1.0, 1.0, 0.0).unwrap();
        let geom = StripGeometry::flat(&grid, p);
        let psi = ScalarField::from_fn(&grid, |x, _| x.cos());
        for n in [1, 2, 4] {
            let out = dn_small_amplitude(&geom, &psi, n).unwrap();
            let want = ops::g0(&psi, &p);
            assert!((&out - &want).max_abs() < 1e-12, "order {n}");
        }
    }

    #[test]
    fn small_amplitude_order_one_matches_closed_form() {
        let grid = PeriodicGrid::new(32, 16, 2.0 * PI, 2.0 * PI).unwrap();
        let p = RegimeParams::new(0.15, 0.8, 0.7, 0.0).unwrap();
        let zeta = ScalarField::from_fn(&grid, |x, y| 0.5 * x.cos() + 0.3 * (x + y).cos());
        let b = ScalarField::zeros(&grid);
        let geom = StripGeometry::new(zeta.clone(), b, p, 0.1).unwrap();
        let psi = ScalarField::from_fn(&grid, |x, y| x.sin() + 0.2 * (y + 1.0).cos());
        let got = dn_small_amplitude(&geom, &psi, 1).unwrap();

        let psi0 = psi.zero_mean();
        let g0psi = ops::g0(&psi0, &p);
        let mut want = g0psi.clone();
        want.axpy(-p.epsilon, &ops::g0(&ops::dealias(&zeta.mul_field(&g0psi)), &p));
        let gpsi = ops::grad_gamma(&psi0, p.gamma);
        want.axpy(
            -p.epsilon * p.mu,
            &ops::dealias(&ops::div_gamma(&gpsi.mul_scalar(&zeta), p.gamma)),
        );
        assert!((&got - &want).max_abs() < 1e-11);
    }

    #[test]
    fn small_amplitude_rejects_bottom_and_high_order() {
        let grid = PeriodicGrid::new(16, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let p = RegimeParams::new(0.2, 1.0, 1.0, 0.5).unwrap();
        let b = ScalarField::from_fn(&grid, |x, _| 0.2 * x.cos());
        let geom = StripGeometry::new(ScalarField::zeros(&grid), b, p, 0.1).unwrap();
        let psi = ScalarField::from_fn(&grid, |x, _| x.cos());
        assert!(matches!(
            dn_small_amplitude(&geom, &psi, 2),
            Err(Error::UnsupportedRegime(_))
        ));
        let flat = StripGeometry::flat(&grid, RegimeParams::new(0.2, 1.0, 1.0, 0.0).unwrap());
        assert!(matches!(
            dn_small_amplitude(&flat, &psi, 9),
            Err(Error::UnsupportedRegime(_))
        ));
    }
}
