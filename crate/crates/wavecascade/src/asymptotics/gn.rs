//! Green-Naghdi / Serre system (ε = 1 resp. ε = √μ):
//!
//!   (h + μ𝒯[h, εb]) ∂t V + h∇ζ + εh(V·∇)V
//!       + με[⅓∇(h³𝒟_V div V) + 𝒬[h, εb](V)] = 0,
//!   ∂t ζ + ∇·(hV) = 0,        h = 1 + ε(ζ − b),
//!
//! with 𝒟_V = −(V·∇) + (div V)· and
//! 𝒬[h,b](V) = ½∇(h²(V·∇)²b) + h(½h𝒟_V div V + (V·∇)²b)∇b.
//! The velocity equation is inverted each stage by conjugate gradient with
//! the flat operator 1 − (μ/3)∇∇· as preconditioner, warm-started from the
//! previous stage.

use std::cell::RefCell;

use rustfft::num_complex::Complex;

use super::{rk4_drive, HyperbolicState, ModelTrajectory};
use crate::dnop::t_operator;
use crate::error::{Error, Result};
use crate::params::RegimeParams;
use crate::spectral::{ops, ScalarField, VectorField};

pub struct GreenNaghdi {
    pub b: ScalarField,
    pub eps: f64,
    pub mu: f64,
    pub dealias: bool,
    pub cg_tol: f64,
    pub cg_maxiter: usize,
    warm: RefCell<Option<VectorField>>,
}

impl GreenNaghdi {
    pub fn new(b: ScalarField, p: &RegimeParams) -> Result<Self> {
        if (p.gamma - 1.0).abs() > 1e-14 {
            return Err(Error::UnsupportedRegime(format!(
                "the Green-Naghdi system is stated for γ = 1, got {}",
                p.gamma
            )));
        }
        Ok(Self {
            b,
            eps: p.epsilon,
            mu: p.mu,
            dealias: true,
            cg_tol: 1e-10,
            cg_maxiter: 400,
            warm: RefCell::new(None),
        })
    }

    fn h_field(&self, zeta: &ScalarField) -> ScalarField {
        let mut h = ScalarField::constant(&zeta.grid, 1.0);
        h.axpy(self.eps, zeta);
        h.axpy(-self.eps, &self.b);
        h
    }

    /// (h + μ𝒯[h, εb]) v, products kept raw so the operator is exactly
    /// symmetric for the grid inner product.
    fn momentum_operator(&self, h: &ScalarField, eb: &ScalarField, v: &VectorField) -> VectorField {
        let mut out = v.mul_scalar(h);
        out.axpy(self.mu, &t_operator(h, eb, v));
        out
    }

    /// Probe symmetry and positivity of the momentum operator on a trial
    /// field; run before a simulation's first step.
    pub fn check_operator(&self, zeta: &ScalarField) -> Result<()> {
        let grid = &zeta.grid;
        let h = self.h_field(zeta);
        if h.min() <= 0.0 {
            return Err(Error::DegenerateGeometry {
                min_depth: h.min(),
                h0: 0.0,
                time: None,
            });
        }
        let eb = self.b.scale(self.eps);
        let u = VectorField::new(
            ScalarField::from_fn(grid, |x, y| (x + 0.3).cos() + 0.4 * y.sin()),
            ScalarField::from_fn(grid, |x, y| (y - 0.7).cos() * x.sin()),
        );
        let w = VectorField::new(
            ScalarField::from_fn(grid, |x, y| (2.0 * x).sin() + y.cos()),
            ScalarField::from_fn(grid, |x, _| 0.5 * x.cos()),
        );
        let ip = |a: &VectorField, b: &VectorField| ops::inner(&a.x, &b.x) + ops::inner(&a.y, &b.y);
        let lu = self.momentum_operator(&h, &eb, &u);
        let lw = self.momentum_operator(&h, &eb, &w);
        let sym = (ip(&lu, &w) - ip(&u, &lw)).abs();
        let scale = ip(&u, &u).sqrt() * ip(&w, &w).sqrt();
        if sym > 1e-10 * scale {
            return Err(Error::SolverFailure { residual: sym, iterations: 0 });
        }
        let pos = ip(&lu, &u);
        if pos <= 0.0 {
            return Err(Error::SolverFailure { residual: pos, iterations: 0 });
        }
        Ok(())
    }

    /// Flat preconditioner (1 − (μ/3)∇∇·)^{-1} applied per Fourier mode.
    fn precondition(&self, r: &VectorField) -> VectorField {
        let grid = r.grid().clone();
        let mut sx = grid.forward(&r.x.values);
        let mut sy = grid.forward(&r.y.values);
        let c = self.mu / 3.0;
        for iy in 0..grid.ny {
            for ix in 0..grid.nx {
                let idx = ix + grid.nx * iy;
                let (kx, ky) = (grid.kx[ix], grid.ky[iy]);
                let k2 = kx * kx + ky * ky;
                let dot = kx * sx[idx] + ky * sy[idx];
                let factor = Complex::new(c / (1.0 + c * k2), 0.0) * dot;
                sx[idx] -= kx * factor;
                sy[idx] -= ky * factor;
            }
        }
        VectorField::new(
            ScalarField::from_values(&grid, grid.inverse(sx)),
            ScalarField::from_values(&grid, grid.inverse(sy)),
        )
    }

    fn solve_momentum(&self, h: &ScalarField, eb: &ScalarField, rhs: &VectorField) -> Result<VectorField> {
        let ip = |a: &VectorField, b: &VectorField| ops::inner(&a.x, &b.x) + ops::inner(&a.y, &b.y);
        let nb = ip(rhs, rhs).sqrt();
        let mut x = match self.warm.borrow().as_ref() {
            Some(w) if w.grid().same_as(rhs.grid()) => w.clone(),
            _ => VectorField::zeros(rhs.grid()),
        };
        if nb == 0.0 {
            return Ok(VectorField::zeros(rhs.grid()));
        }
        let mut r = rhs - &self.momentum_operator(h, eb, &x);
        let mut z = self.precondition(&r);
        let mut p = z.clone();
        let mut rho = ip(&r, &z);
        let mut iters = 0;
        while ip(&r, &r).sqrt() / nb > self.cg_tol {
            if iters >= self.cg_maxiter {
                return Err(Error::SolverFailure {
                    residual: ip(&r, &r).sqrt() / nb,
                    iterations: iters,
                });
            }
            let q = self.momentum_operator(h, eb, &p);
            let alpha = rho / ip(&p, &q);
            x.axpy(alpha, &p);
            r.axpy(-alpha, &q);
            z = self.precondition(&r);
            let rho2 = ip(&r, &z);
            let beta = rho2 / rho;
            rho = rho2;
            let mut pnew = z.clone();
            pnew.axpy(beta, &p);
            p = pnew;
            iters += 1;
        }
        *self.warm.borrow_mut() = Some(x.clone());
        Ok(x)
    }

    pub fn rhs(&self, state: &HyperbolicState) -> Result<(ScalarField, VectorField)> {
        let clean = self.dealias;
        let (eps, mu) = (self.eps, self.mu);
        let h = self.h_field(&state.zeta);
        if h.min() <= 0.0 {
            return Err(Error::DegenerateGeometry {
                min_depth: h.min(),
                h0: 0.0,
                time: Some(state.time),
            });
        }
        let eb = self.b.scale(eps);
        let v = &state.v;

        let div_v = ops::div(v);
        // 𝒟_V div V = −(V·∇)(div V) + (div V)²
        let gdiv = ops::grad(&div_v);
        let mut dv_div = ops::prod(&div_v, &div_v, clean);
        dv_div.axpy(-1.0, &{
            let mut s = ops::prod(&v.x, &gdiv.x, clean);
            s.axpy(1.0, &ops::prod(&v.y, &gdiv.y, clean));
            s
        });

        // h∇ζ + εh(V·∇)V
        let gz = ops::grad(&state.zeta);
        let mut rhs_v = gz.mul_scalar(&h);
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
        rhs_v.axpy(eps, &adv.mul_scalar(&h));

        // με[⅓∇(h³𝒟_V div V) + 𝒬[h, εb](V)]
        let h2 = h.mul_field(&h);
        let h3 = h2.mul_field(&h);
        rhs_v.axpy(
            mu * eps / 3.0,
            &ops::grad(&ops::prod(&h3, &dv_div, clean)),
        );
        {
            // (V·∇)b and (V·∇)²b
            let gb = ops::grad(&eb);
            let vb = {
                let mut s = ops::prod(&v.x, &gb.x, clean);
                s.axpy(1.0, &ops::prod(&v.y, &gb.y, clean));
                s
            };
            let gvb = ops::grad(&vb);
            let v2b = {
                let mut s = ops::prod(&v.x, &gvb.x, clean);
                s.axpy(1.0, &ops::prod(&v.y, &gvb.y, clean));
                s
            };
            // ½∇(h²(V·∇)²b)
            let mut q = ops::grad(&ops::prod(&h2, &v2b, clean)).scale(0.5);
            // h(½h𝒟_V div V + (V·∇)²b)∇b
            let mut inner = ops::prod(&h, &dv_div, clean).scale(0.5);
            inner.axpy(1.0, &v2b);
            q.axpy(1.0, &gb.mul_scalar(&ops::prod(&h, &inner, clean)));
            rhs_v.axpy(mu * eps, &q);
        }
        let rhs_v = rhs_v.scale(-1.0);
        let mut dv = self.solve_momentum(&h, &eb, &rhs_v)?;
        if clean {
            dv = VectorField::new(ops::dealias(&dv.x), ops::dealias(&dv.y));
        }

        let flux = VectorField::new(ops::prod(&h, &v.x, clean), ops::prod(&h, &v.y, clean));
        let dzeta = -&ops::div(&flux);
        Ok((dzeta, dv))
    }
}

/// Initial velocity map (1 − (μ/h⁰)𝒯[h⁰, εb])∇ψ⁰.
pub fn gn_initial_velocity(
    zeta0: &ScalarField,
    psi0: &ScalarField,
    b: &ScalarField,
    p: &RegimeParams,
) -> Result<VectorField> {
    let gpsi = ops::grad(&psi0.zero_mean());
    let mut h0 = ScalarField::constant(&zeta0.grid, 1.0);
    h0.axpy(p.epsilon, zeta0);
    h0.axpy(-p.epsilon, b);
    if h0.min() <= 0.0 {
        return Err(Error::DegenerateGeometry {
            min_depth: h0.min(),
            h0: 0.0,
            time: None,
        });
    }
    let t = t_operator(&h0, &b.scale(p.epsilon), &gpsi);
    let mut v = gpsi;
    v.axpy(-p.mu, &VectorField::new(t.x.div_field(&h0), t.y.div_field(&h0)));
    Ok(v)
}

/// Velocity reconstruction (1 + (μ/h)𝒯[h, εb])V for comparison with ∇ψ.
pub fn gn_reconstruct(state: &HyperbolicState, b: &ScalarField, p: &RegimeParams) -> VectorField {
    let mut h = ScalarField::constant(&state.zeta.grid, 1.0);
    h.axpy(p.epsilon, &state.zeta);
    h.axpy(-p.epsilon, b);
    let t = t_operator(&h, &b.scale(p.epsilon), &state.v);
    let mut v = state.v.clone();
    v.axpy(p.mu, &VectorField::new(t.x.div_field(&h), t.y.div_field(&h)));
    v
}

pub fn gn_integrate(
    state0: &HyperbolicState,
    b: &ScalarField,
    p: &RegimeParams,
    t_end: f64,
    dt: f64,
    snapshot_stride: usize,
) -> Result<ModelTrajectory> {
    let sys = GreenNaghdi::new(b.clone(), p)?;
    sys.check_operator(&state0.zeta)?;
    rk4_drive(state0, t_end, dt, snapshot_stride, |s| sys.rhs(s))
}
