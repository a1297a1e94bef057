//! Elliptic Dirichlet-Neumann backend on the straightened strip.
//!
//! The potential is expanded in Fourier modes horizontally and on
//! Chebyshev-Gauss-Lobatto levels in z ∈ [−1, 0]. The trace ψ is lifted by
//! the flat-strip harmonic extension, the residual problem is solved by
//! conjugate gradient on the symmetric positive weak form
//! ⟨(1+Q[σ])∇^{μ,γ}·, ∇^{μ,γ}·⟩ (Clenshaw-Curtis quadrature in z),
//! preconditioned by the exactly factorized flat-strip operator. The
//! returned operator value is the variationally consistent surface flux:
//! the surface row of the weak operator applied to the full potential. This
//! makes discrete self-adjointness and positivity exact up to the solver
//! tolerance.

use std::sync::Arc;

use rustfft::num_complex::Complex;

use super::strip::StripGeometry;
use crate::error::{Error, Result};
use crate::params::RegimeParams;
use crate::spectral::{PeriodicGrid, ScalarField, Spectrum};

/// Chebyshev-Gauss-Lobatto nodes on [−1, 0] (surface first), the scaled
/// differentiation matrix and Clenshaw-Curtis weights.
pub(crate) fn cgl_levels(nz: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    assert!(nz >= 2);
    let n = nz - 1;
    let xc: Vec<f64> = (0..nz)
        .map(|j| (std::f64::consts::PI * j as f64 / n as f64).cos())
        .collect();
    let z: Vec<f64> = xc.iter().map(|x| (x - 1.0) / 2.0).collect();

    // differentiation matrix on the CGL nodes of [-1,1], then scaled by 2
    let c = |i: usize| -> f64 {
        let base = if i == 0 || i == n { 2.0 } else { 1.0 };
        base * if i % 2 == 0 { 1.0 } else { -1.0 }
    };
    let mut d = vec![0.0; nz * nz];
    for i in 0..nz {
        let mut row_sum = 0.0;
        for j in 0..nz {
            if i != j {
                let v = c(i) / c(j) / (xc[i] - xc[j]);
                d[i * nz + j] = v;
                row_sum += v;
            }
        }
        d[i * nz + i] = -row_sum;
    }
    for v in d.iter_mut() {
        *v *= 2.0; // d/dz = 2 d/dx under z = (x-1)/2
    }

    // Clenshaw-Curtis weights on [-1,1], halved for the unit-length strip
    let mut w = vec![0.0; nz];
    let theta: Vec<f64> = (0..nz).map(|j| std::f64::consts::PI * j as f64 / n as f64).collect();
    let mut v = vec![1.0; n.saturating_sub(1)];
    if n % 2 == 0 {
        w[0] = 1.0 / (n * n - 1) as f64;
        w[n] = w[0];
        for k in 1..n / 2 {
            for (i, vi) in v.iter_mut().enumerate() {
                *vi -= 2.0 * (2.0 * k as f64 * theta[i + 1]).cos() / (4 * k * k - 1) as f64;
            }
        }
        for (i, vi) in v.iter_mut().enumerate() {
            *vi -= (n as f64 * theta[i + 1]).cos() / (n * n - 1) as f64;
        }
    } else {
        w[0] = 1.0 / (n * n) as f64;
        w[n] = w[0];
        for k in 1..=(n - 1) / 2 {
            for (i, vi) in v.iter_mut().enumerate() {
                *vi -= 2.0 * (2.0 * k as f64 * theta[i + 1]).cos() / (4 * k * k - 1) as f64;
            }
        }
    }
    for i in 1..n {
        w[i] = 2.0 * v[i - 1] / n as f64;
    }
    for wi in w.iter_mut() {
        *wi *= 0.5;
    }
    (z, w, d)
}

/// Potential on the strip: nz Chebyshev levels of nx × ny planes,
/// level-major (`values[k*n + idx]`), surface level first.
#[derive(Debug, Clone)]
pub struct StripField {
    pub grid: Arc<PeriodicGrid>,
    pub nz: usize,
    /// CGL levels in [−1, 0], surface first.
    pub z: Vec<f64>,
    pub values: Vec<f64>,
}

impl StripField {
    pub fn level(&self, k: usize) -> &[f64] {
        let n = self.grid.len();
        &self.values[k * n..(k + 1) * n]
    }
}

struct GeomData {
    /// μ(1+∂zσ), γ²μ(1+∂zσ)
    pxx: Vec<f64>,
    pyy: Vec<f64>,
    /// per-level P entries
    pxz: Vec<f64>,
    pyz: Vec<f64>,
    pzz: Vec<f64>,
}

/// Stateful elliptic solver; caches the flat-strip preconditioner factors
/// and the lift profiles per (grid, μ, γ, nz), plus a warm-start vector.
pub struct DnElliptic {
    grid: Arc<PeriodicGrid>,
    pub p: RegimeParams,
    pub nz: usize,
    pub cg_tol: f64,
    pub cg_maxiter: usize,
    z: Vec<f64>,
    wz: Vec<f64>,
    dz: Vec<f64>,
    /// flat extension profile per (level, mode)
    lift: Vec<f64>,
    chol: Vec<Vec<f64>>,
    mode_factor: Vec<usize>,
    warm: Option<Vec<f64>>,
    pub last_iterations: usize,
}

fn cholesky_in_place(a: &mut [f64], m: usize) -> Result<()> {
    for i in 0..m {
        for j in 0..=i {
            let mut s = a[i * m + j];
            for k in 0..j {
                s -= a[i * m + k] * a[j * m + k];
            }
            if i == j {
                if s <= 0.0 {
                    return Err(Error::SolverFailure { residual: s, iterations: 0 });
                }
                a[i * m + i] = s.sqrt();
            } else {
                a[i * m + j] = s / a[j * m + j];
            }
        }
    }
    // zero strict upper triangle
    for i in 0..m {
        for j in i + 1..m {
            a[i * m + j] = 0.0;
        }
    }
    Ok(())
}

fn chol_solve(l: &[f64], m: usize, rhs: &mut [Complex<f64>]) {
    for i in 0..m {
        let mut s = rhs[i];
        for k in 0..i {
            s -= l[i * m + k] * rhs[k];
        }
        rhs[i] = s / l[i * m + i];
    }
    for i in (0..m).rev() {
        let mut s = rhs[i];
        for k in i + 1..m {
            s -= l[k * m + i] * rhs[k];
        }
        rhs[i] = s / l[i * m + i];
    }
}

/// Numerically stable cosh(a(z+1))/cosh(a) for a ≥ 0, z ∈ [−1, 0].
fn cosh_ratio(a: f64, z: f64) -> f64 {
    if a == 0.0 {
        return 1.0;
    }
    (a * z).exp() * (1.0 + (-2.0 * a * (z + 1.0)).exp()) / (1.0 + (-2.0 * a).exp())
}

impl DnElliptic {
    pub fn new(
        grid: &Arc<PeriodicGrid>,
        p: &RegimeParams,
        nz: usize,
        cg_tol: f64,
        cg_maxiter: usize,
    ) -> Result<Self> {
        if nz < 8 {
            return Err(Error::InvalidInput(format!("nz must be ≥ 8, got {nz}")));
        }
        if !(cg_tol > 0.0 && cg_tol <= 1e-4) {
            return Err(Error::InvalidInput(format!("cg_tol must lie in (0,1e-4], got {cg_tol}")));
        }
        let (z, wz, dz) = cgl_levels(nz);
        let n = grid.len();
        let mut kg2 = vec![0.0; n];
        for iy in 0..grid.ny {
            for ix in 0..grid.nx {
                let kx = grid.kx_sym[ix];
                let ky = grid.ky_sym[iy];
                kg2[ix + grid.nx * iy] = kx * kx + p.gamma * p.gamma * ky * ky;
            }
        }
        let mut lift = vec![0.0; nz * n];
        for k in 0..nz {
            for i in 0..n {
                lift[k * n + i] = cosh_ratio(p.mu.sqrt() * kg2[i].sqrt(), z[k]);
            }
        }

        // flat-strip factors per distinct μ|ξ^γ|²
        let hxy = grid.cell_area();
        let m = nz - 1;
        let mut keys: Vec<u64> = Vec::new();
        let mut chol: Vec<Vec<f64>> = Vec::new();
        let mut mode_factor = vec![0usize; n];
        for i in 0..n {
            let key = (p.mu * kg2[i]).to_bits();
            let idx = match keys.iter().position(|&k| k == key) {
                Some(idx) => idx,
                None => {
                    let mut mat = vec![0.0; m * m];
                    // rows/cols over interior levels 1..nz
                    for r in 0..m {
                        for c in 0..m {
                            let mut s = 0.0;
                            for q in 0..nz {
                                s += dz[q * nz + r + 1] * wz[q] * hxy * dz[q * nz + c + 1];
                            }
                            if r == c {
                                s += p.mu * kg2[i] * wz[r + 1] * hxy;
                            }
                            mat[r * m + c] = s;
                        }
                    }
                    cholesky_in_place(&mut mat, m)?;
                    keys.push(key);
                    chol.push(mat);
                    keys.len() - 1
                }
            };
            mode_factor[i] = idx;
        }

        Ok(Self {
            grid: grid.clone(),
            p: *p,
            nz,
            cg_tol,
            cg_maxiter,
            z,
            wz,
            dz,
            lift,
            chol,
            mode_factor,
            warm: None,
            last_iterations: 0,
        })
    }

    /// Invalidate the warm-start cache (call when jumping to an unrelated state).
    pub fn reset_warm_start(&mut self) {
        self.warm = None;
    }

    fn geom_data(&self, geom: &StripGeometry) -> GeomData {
        use crate::spectral::ops;
        let n = self.grid.len();
        let (eps, beta, mu, gamma) = (geom.p.epsilon, geom.p.beta, self.p.mu, self.p.gamma);
        let a = geom.dz_sigma().values;
        let zx = ops::dx(&geom.zeta);
        let zy = ops::dy(&geom.zeta);
        let bx = ops::dx(&geom.b);
        let by = ops::dy(&geom.b);
        let mut pxx = vec![0.0; n];
        let mut pyy = vec![0.0; n];
        for i in 0..n {
            pxx[i] = mu * (1.0 + a[i]);
            pyy[i] = gamma * gamma * mu * (1.0 + a[i]);
        }
        let mut pxz = vec![0.0; self.nz * n];
        let mut pyz = vec![0.0; self.nz * n];
        let mut pzz = vec![0.0; self.nz * n];
        for k in 0..self.nz {
            let (czb, cz) = (-beta * self.z[k], eps * (self.z[k] + 1.0));
            for i in 0..n {
                let sx = czb * bx.values[i] + cz * zx.values[i];
                let sy = czb * by.values[i] + cz * zy.values[i];
                pxz[k * n + i] = -mu * sx;
                pyz[k * n + i] = -gamma * gamma * mu * sy;
                pzz[k * n + i] =
                    (1.0 + mu * sx * sx + gamma * gamma * mu * sy * sy) / (1.0 + a[i]);
            }
        }
        GeomData { pxx, pyy, pxz, pyz, pzz }
    }

    /// Gradient planes of a strip potential (all nz levels expected in phi).
    fn gradient(&self, phi: &[f64], gx: &mut [f64], gy: &mut [f64], gz: &mut [f64]) {
        let n = self.grid.len();
        for k in 0..self.nz {
            let plane = &phi[k * n..(k + 1) * n];
            let mut spec = self.grid.forward(plane);
            let mut sy: Spectrum = spec.clone();
            for iy in 0..self.grid.ny {
                for ix in 0..self.grid.nx {
                    let idx = ix + self.grid.nx * iy;
                    spec[idx] *= Complex::new(0.0, self.grid.kx[ix]);
                    sy[idx] *= Complex::new(0.0, self.grid.ky[iy]);
                }
            }
            gx[k * n..(k + 1) * n].copy_from_slice(&self.grid.inverse(spec));
            gy[k * n..(k + 1) * n].copy_from_slice(&self.grid.inverse(sy));
        }
        // dz along columns, dense matvec per level pair
        for v in gz.iter_mut() {
            *v = 0.0;
        }
        for k in 0..self.nz {
            for j in 0..self.nz {
                let d = self.dz[k * self.nz + j];
                if d == 0.0 {
                    continue;
                }
                let src = &phi[j * n..(j + 1) * n];
                let dst = &mut gz[k * n..(k + 1) * n];
                for i in 0..n {
                    dst[i] += d * src[i];
                }
            }
        }
    }

    /// m = P·g, weighted by the z-quadrature and cell area (in place).
    fn weighted_flux(&self, gd: &GeomData, gx: &mut [f64], gy: &mut [f64], gz: &mut [f64]) {
        let n = self.grid.len();
        let hxy = self.grid.cell_area();
        for k in 0..self.nz {
            let w = self.wz[k] * hxy;
            for i in 0..n {
                let idx = k * n + i;
                let (vx, vy, vz) = (gx[idx], gy[idx], gz[idx]);
                let mx = gd.pxx[i] * vx + gd.pxz[idx] * vz;
                let my = gd.pyy[i] * vy + gd.pyz[idx] * vz;
                let mz = gd.pxz[idx] * vx + gd.pyz[idx] * vy + gd.pzz[idx] * vz;
                gx[idx] = w * mx;
                gy[idx] = w * my;
                gz[idx] = w * mz;
            }
        }
    }

    /// Divergence-transpose assembly of the weighted flux planes:
    /// out_k = −(∂x mx + ∂y my)_k + Σ_j Dz[j,k] mz_j, for levels in `rows`.
    fn assemble(&self, mx: &[f64], my: &[f64], mz: &[f64], rows: std::ops::Range<usize>, out: &mut [f64]) {
        let n = self.grid.len();
        for v in out.iter_mut() {
            *v = 0.0;
        }
        for k in rows.clone() {
            let mut sx = self.grid.forward(&mx[k * n..(k + 1) * n]);
            let sy = self.grid.forward(&my[k * n..(k + 1) * n]);
            for iy in 0..self.grid.ny {
                for ix in 0..self.grid.nx {
                    let idx = ix + self.grid.nx * iy;
                    sx[idx] = Complex::new(0.0, -self.grid.kx[ix]) * sx[idx]
                        + Complex::new(0.0, -self.grid.ky[iy]) * sy[idx];
                }
            }
            let div = self.grid.inverse(sx);
            let off = (k - rows.start) * n;
            out[off..off + n].copy_from_slice(&div);
        }
        for k in rows.clone() {
            let off = (k - rows.start) * n;
            for j in 0..self.nz {
                let d = self.dz[j * self.nz + k];
                if d == 0.0 {
                    continue;
                }
                let src = &mz[j * n..(j + 1) * n];
                for i in 0..n {
                    out[off + i] += d * src[i];
                }
            }
        }
    }

    /// Weak operator applied to an interior DOF vector (surface plane = 0).
    fn apply_k(&self, gd: &GeomData, v: &[f64], scratch: &mut Scratch, out: &mut [f64]) {
        let n = self.grid.len();
        scratch.phi[..n].iter_mut().for_each(|x| *x = 0.0);
        scratch.phi[n..].copy_from_slice(v);
        self.gradient(&scratch.phi, &mut scratch.gx, &mut scratch.gy, &mut scratch.gz);
        self.weighted_flux(gd, &mut scratch.gx, &mut scratch.gy, &mut scratch.gz);
        self.assemble(&scratch.gx, &scratch.gy, &scratch.gz, 1..self.nz, out);
    }

    fn precond(&self, r: &[f64], out: &mut [f64]) {
        let n = self.grid.len();
        let m = self.nz - 1;
        // per-level forward FFT
        let mut specs: Vec<Spectrum> = (0..m).map(|k| self.grid.forward(&r[k * n..(k + 1) * n])).collect();
        let mut col = vec![Complex::default(); m];
        for i in 0..n {
            for (k, s) in specs.iter().enumerate() {
                col[k] = s[i];
            }
            chol_solve(&self.chol[self.mode_factor[i]], m, &mut col);
            for (k, s) in specs.iter_mut().enumerate() {
                s[i] = col[k];
            }
        }
        for (k, s) in specs.into_iter().enumerate() {
            out[k * n..(k + 1) * n].copy_from_slice(&self.grid.inverse(s));
        }
    }

    /// Flat-strip lift of the (zero-mean) trace.
    fn lift_trace(&self, psi: &ScalarField) -> Vec<f64> {
        let n = self.grid.len();
        let spec = self.grid.forward(&psi.values);
        let mut phi = vec![0.0; self.nz * n];
        for k in 0..self.nz {
            let mut s = spec.clone();
            for i in 0..n {
                s[i] *= self.lift[k * n + i];
            }
            phi[k * n..(k + 1) * n].copy_from_slice(&self.grid.inverse(s));
        }
        phi
    }

    /// Solve for the full strip potential with ψ as surface trace.
    fn solve_potential(&mut self, geom: &StripGeometry, psi: &ScalarField) -> Result<(GeomData, Vec<f64>)> {
        if !geom.zeta.grid.same_as(&self.grid) {
            return Err(Error::InvalidInput("geometry grid differs from solver grid".into()));
        }
        let n = self.grid.len();
        let psi0 = psi.zero_mean();
        let gd = self.geom_data(geom);
        let mut phi = self.lift_trace(&psi0);

        // rhs = −(K φ_lift) on interior rows
        let mut scratch = Scratch::new(self.nz, n);
        let mut b = vec![0.0; (self.nz - 1) * n];
        {
            let mut gx = scratch.gx.clone();
            let mut gy = scratch.gy.clone();
            let mut gz = scratch.gz.clone();
            self.gradient(&phi, &mut gx, &mut gy, &mut gz);
            self.weighted_flux(&gd, &mut gx, &mut gy, &mut gz);
            self.assemble(&gx, &gy, &gz, 1..self.nz, &mut b);
            for v in b.iter_mut() {
                *v = -*v;
            }
        }

        let dot = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };
        let nb = dot(&b, &b).sqrt();
        let mut x = match &self.warm {
            Some(w) if w.len() == b.len() => w.clone(),
            _ => vec![0.0; b.len()],
        };
        if nb > 0.0 {
            let mut r = vec![0.0; b.len()];
            self.apply_k(&gd, &x, &mut scratch, &mut r);
            for (ri, bi) in r.iter_mut().zip(&b) {
                *ri = bi - *ri;
            }
            let mut zv = vec![0.0; b.len()];
            self.precond(&r, &mut zv);
            let mut pdir = zv.clone();
            let mut rho = dot(&r, &zv);
            let mut q = vec![0.0; b.len()];
            let mut iters = 0;
            while dot(&r, &r).sqrt() / nb > self.cg_tol {
                if iters >= self.cg_maxiter {
                    return Err(Error::SolverFailure {
                        residual: dot(&r, &r).sqrt() / nb,
                        iterations: iters,
                    });
                }
                self.apply_k(&gd, &pdir, &mut scratch, &mut q);
                let alpha = rho / dot(&pdir, &q);
                for i in 0..x.len() {
                    x[i] += alpha * pdir[i];
                    r[i] -= alpha * q[i];
                }
                self.precond(&r, &mut zv);
                let rho2 = dot(&r, &zv);
                let beta = rho2 / rho;
                rho = rho2;
                for i in 0..pdir.len() {
                    pdir[i] = zv[i] + beta * pdir[i];
                }
                iters += 1;
            }
            self.last_iterations = iters;
        } else {
            self.last_iterations = 0;
            x.iter_mut().for_each(|v| *v = 0.0);
        }
        self.warm = Some(x.clone());
        for (dst, src) in phi[n..].iter_mut().zip(&x) {
            *dst += src;
        }
        Ok((gd, phi))
    }

    /// Operator value on the surface grid.
    pub fn apply(&mut self, geom: &StripGeometry, psi: &ScalarField) -> Result<ScalarField> {
        let (gd, phi) = self.solve_potential(geom, psi)?;
        Ok(self.surface_flux(&gd, &phi))
    }

    /// Operator value together with the strip potential (needed by the
    /// Taylor-sign check and by diagnostics).
    pub fn apply_with_potential(
        &mut self,
        geom: &StripGeometry,
        psi: &ScalarField,
    ) -> Result<(ScalarField, StripField)> {
        let (gd, phi) = self.solve_potential(geom, psi)?;
        let flux = self.surface_flux(&gd, &phi);
        let strip = StripField {
            grid: self.grid.clone(),
            nz: self.nz,
            z: self.z.clone(),
            values: phi,
        };
        Ok((flux, strip))
    }

    fn surface_flux(&self, gd: &GeomData, phi: &[f64]) -> ScalarField {
        let n = self.grid.len();
        let mut gx = vec![0.0; self.nz * n];
        let mut gy = vec![0.0; self.nz * n];
        let mut gz = vec![0.0; self.nz * n];
        self.gradient(phi, &mut gx, &mut gy, &mut gz);
        self.weighted_flux(gd, &mut gx, &mut gy, &mut gz);
        let mut row0 = vec![0.0; n];
        self.assemble(&gx, &gy, &gz, 0..1, &mut row0);
        let scale = 1.0 / self.grid.cell_area();
        for v in row0.iter_mut() {
            *v *= scale;
        }
        // constants lie in the kernel of the adjoint as well: remove the
        // solver-tolerance-level mean so that ⟨1, 𝒢ψ⟩ = 0 holds exactly
        let field = ScalarField::from_values(&self.grid, row0);
        field.zero_mean()
    }

    /// z-derivative rows of the strip potential at the bottom level,
    /// used to reconstruct velocities from `StripField`s.
    pub fn dz_matrix(&self) -> (&[f64], usize) {
        (&self.dz, self.nz)
    }
}

struct Scratch {
    phi: Vec<f64>,
    gx: Vec<f64>,
    gy: Vec<f64>,
    gz: Vec<f64>,
}

impl Scratch {
    fn new(nz: usize, n: usize) -> Self {
        Self {
            phi: vec![0.0; nz * n],
            gx: vec![0.0; nz * n],
            gy: vec![0.0; nz * n],
            gz: vec![0.0; nz * n],
        }
    }
}
