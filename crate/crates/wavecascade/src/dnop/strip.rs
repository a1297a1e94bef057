//! Straightened-strip geometry: the σ-diffeomorphism and the matrix Q[σ].
//!
//! The fluid domain −1+βb < z < εζ is flattened onto the strip −1 < z < 0 by
//! z ↦ z + σ(X,z) with σ(X,z) = −βz·b(X) + ε(z+1)·ζ(X), which turns the
//! scaled Laplace operator into ∇^{μ,γ}·(1+Q[σ])∇^{μ,γ} with
//! ∇^{μ,γ} = (√μ∂x, γ√μ∂y, ∂z)^T.

use crate::error::{Error, Result};
use crate::params::RegimeParams;
use crate::spectral::ops;
use crate::spectral::ScalarField;

/// Surface/bottom pair with parameters; admissibility 1+εζ−βb ≥ h0 is
/// checked at construction.
#[derive(Debug, Clone)]
pub struct StripGeometry {
    pub zeta: ScalarField,
    pub b: ScalarField,
    pub p: RegimeParams,
    pub h0: f64,
}

pub const DEFAULT_H0: f64 = 0.1;

impl StripGeometry {
    pub fn new(zeta: ScalarField, b: ScalarField, p: RegimeParams, h0: f64) -> Result<Self> {
        debug_assert!(zeta.grid.same_as(&b.grid));
        zeta.check_finite("zeta")?;
        b.check_finite("b")?;
        if !(h0 > 0.0) {
            return Err(Error::InvalidInput(format!("h0 must be positive, got {h0}")));
        }
        let geom = Self { zeta, b, p, h0 };
        let min_depth = geom.min_depth();
        if min_depth < h0 {
            return Err(Error::DegenerateGeometry {
                min_depth,
                h0,
                time: None,
            });
        }
        Ok(geom)
    }

    /// Flat-surface, flat-bottom geometry.
    pub fn flat(grid: &std::sync::Arc<crate::spectral::PeriodicGrid>, p: RegimeParams) -> Self {
        Self {
            zeta: ScalarField::zeros(grid),
            b: ScalarField::zeros(grid),
            p,
            h0: DEFAULT_H0,
        }
    }

    /// Water column 1 + εζ − βb.
    pub fn depth(&self) -> ScalarField {
        let (eps, beta) = (self.p.epsilon, self.p.beta);
        let mut d = ScalarField::constant(&self.zeta.grid, 1.0);
        d.axpy(eps, &self.zeta);
        d.axpy(-beta, &self.b);
        d
    }

    pub fn min_depth(&self) -> f64 {
        self.depth().min()
    }

    /// ∂zσ = εζ − βb, independent of z.
    pub fn dz_sigma(&self) -> ScalarField {
        let mut a = self.zeta.scale(self.p.epsilon);
        a.axpy(-self.p.beta, &self.b);
        a
    }
}

/// σ(X, z) = −βz·b + ε(z+1)·ζ at a fixed strip level z ∈ [−1, 0].
pub fn sigma_map(geom: &StripGeometry, z: f64) -> ScalarField {
    debug_assert!((-1.0..=0.0).contains(&z));
    let mut s = geom.b.scale(-geom.p.beta * z);
    s.axpy(geom.p.epsilon * (z + 1.0), &geom.zeta);
    s
}

/// Per-node symmetric matrix Q[σ] at a fixed strip level, ordered against
/// ∇^{μ,γ} = (√μ∂x, γ√μ∂y, ∂z).
#[derive(Debug, Clone)]
pub struct QMatrixField {
    pub xx: ScalarField,
    pub yy: ScalarField,
    pub xy: ScalarField,
    pub xz: ScalarField,
    pub yz: ScalarField,
    pub zz: ScalarField,
}

impl QMatrixField {
    /// (1+Q)Θ·Θ at one node.
    pub fn quadratic_form(&self, idx: usize, th: [f64; 3]) -> f64 {
        let q = [
            [1.0 + self.xx.values[idx], self.xy.values[idx], self.xz.values[idx]],
            [self.xy.values[idx], 1.0 + self.yy.values[idx], self.yz.values[idx]],
            [self.xz.values[idx], self.yz.values[idx], 1.0 + self.zz.values[idx]],
        ];
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += q[i][j] * th[i] * th[j];
            }
        }
        s
    }
}

/// Q[σ] evaluated at strip level z.
pub fn q_matrix(geom: &StripGeometry, z: f64) -> Result<QMatrixField> {
    let a = geom.dz_sigma();
    if 1.0 + a.min() <= 0.0 {
        return Err(Error::DegenerateGeometry {
            min_depth: 1.0 + a.min(),
            h0: 0.0,
            time: None,
        });
    }
    let sigma = sigma_map(geom, z);
    let sx = ops::dx(&sigma);
    let sy = ops::dy(&sigma);
    let (mu, gamma) = (geom.p.mu, geom.p.gamma);
    let sq = mu.sqrt();
    let grid = &geom.zeta.grid;
    let mut zz = ScalarField::zeros(grid);
    for i in 0..grid.len() {
        let (av, sxv, syv) = (a.values[i], sx.values[i], sy.values[i]);
        zz.values[i] = (-av + mu * sxv * sxv + gamma * gamma * mu * syv * syv) / (1.0 + av);
    }
    Ok(QMatrixField {
        xx: a.clone(),
        yy: a,
        xy: ScalarField::zeros(grid),
        xz: sx.scale(-sq),
        yz: sy.scale(-gamma * sq),
        zz,
    })
}

/// Coercivity constant k[σ] = 1 + ‖∂zσ‖∞ + (1/h0)(1 + √μ‖∇^γσ‖∞)².
pub fn coercivity_constant(geom: &StripGeometry) -> f64 {
    let a = geom.dz_sigma();
    let mut grad_sup: f64 = 0.0;
    // σ is affine in z; the sup over the strip is attained at an endpoint
    for z in [-1.0, 0.0] {
        let sigma = sigma_map(geom, z);
        let sx = ops::dx(&sigma);
        let sy = ops::dy(&sigma);
        for i in 0..sx.values.len() {
            let g = (sx.values[i].powi(2) + (geom.p.gamma * sy.values[i]).powi(2)).sqrt();
            grad_sup = grad_sup.max(g);
        }
    }
    1.0 + a.max_abs() + (1.0 + geom.p.mu.sqrt() * grad_sup).powi(2) / geom.h0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::PeriodicGrid;
    use std::f64::consts::PI;

    fn geom() -> StripGeometry {
        let g = PeriodicGrid::new(16, 16, 2.0 * PI, 2.0 * PI).unwrap();
        let zeta = ScalarField::from_fn(&g, |x, y| 0.4 * x.cos() + 0.2 * (x + y).sin());
        let b = ScalarField::from_fn(&g, |_, y| 0.3 * (y + 0.4).cos());
        let p = RegimeParams::new(0.5, 0.8, 0.7, 0.6).unwrap();
        StripGeometry::new(zeta, b, p, 0.1).unwrap()
    }

    #[test]
    fn sigma_traces() {
        let geom = geom();
        // z = 0: surface trace εζ
        let s0 = sigma_map(&geom, 0.0);
        assert!((&s0 - &geom.zeta.scale(geom.p.epsilon)).max_abs() < 1e-14);
        // z = -1: bottom trace βb
        let sb = sigma_map(&geom, -1.0);
        assert!((&sb - &geom.b.scale(geom.p.beta)).max_abs() < 1e-14);
        // flat case vanishes at every level
        let g = geom.zeta.grid.clone();
        let flat = StripGeometry::flat(&g, geom.p);
        for z in [-1.0, -0.5, 0.0] {
            assert_eq!(sigma_map(&flat, z).max_abs(), 0.0);
        }
    }

    #[test]
    fn q_vanishes_on_flat_geometry() {
        let g = PeriodicGrid::new(16, 8, 1.0, 1.0).unwrap();
        let p = RegimeParams::new(1.0, 1.0, 1.0, 0.0).unwrap();
        let q = q_matrix(&StripGeometry::flat(&g, p), -0.5).unwrap();
        for f in [&q.xx, &q.yy, &q.xy, &q.xz, &q.yz, &q.zz] {
            assert!(f.max_abs() < 1e-14);
        }
    }

    #[test]
    fn coercivity_bound_holds() {
        let geom = geom();
        let k = coercivity_constant(&geom);
        let mut rng = 2654435769u64;
        let mut rand = move || {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (rng >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for z in [-1.0, -0.37, 0.0] {
            let q = q_matrix(&geom, z).unwrap();
            for _ in 0..64 {
                let idx = (rand().abs() * (geom.zeta.grid.len() - 1) as f64) as usize;
                let th = [rand(), rand(), rand()];
                let norm2 = th.iter().map(|t| t * t).sum::<f64>();
                let form = q.quadratic_form(idx, th);
                assert!(form >= 0.0, "1+Q must be nonnegative definite");
                assert!(
                    norm2 <= k * form * (1.0 + 1e-9) + 1e-12,
                    "coercivity violated: |Θ|²={norm2:.3e}, k·form={:.3e}",
                    k * form
                );
            }
        }
    }

    #[test]
    fn unit_determinant_structure() {
        // (1+Q)Θ·Θ = |BΘ|²/(1+∂zσ)
        let geom = geom();
        let z = -0.42;
        let q = q_matrix(&geom, z).unwrap();
        let a = geom.dz_sigma();
        let sigma = sigma_map(&geom, z);
        let sx = ops::dx(&sigma);
        let sy = ops::dy(&sigma);
        let sq = geom.p.mu.sqrt();
        let gam = geom.p.gamma;
        let th = [0.3, -1.1, 0.7];
        for idx in [0, 5, 100, 200] {
            let (av, sxv, syv) = (a.values[idx], sx.values[idx], sy.values[idx]);
            let b_th = [
                (1.0 + av) * th[0] - sq * sxv * th[2],
                (1.0 + av) * th[1] - gam * sq * syv * th[2],
                th[2],
            ];
            let want = b_th.iter().map(|v| v * v).sum::<f64>() / (1.0 + av);
            let got = q.quadratic_form(idx, th);
            assert!((want - got).abs() < 1e-12 * (1.0 + want.abs()));
        }
    }

    #[test]
    fn geometry_rejects_pinched_layer() {
        let g = PeriodicGrid::new(16, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let zeta = ScalarField::from_fn(&g, |x, _| -1.2 * x.cos().powi(2));
        let b = ScalarField::zeros(&g);
        let p = RegimeParams::new(1.0, 0.5, 1.0, 0.0).unwrap();
        assert!(matches!(
            StripGeometry::new(zeta, b, p, 0.1),
            Err(Error::DegenerateGeometry { .. })
        ));
    }
}
