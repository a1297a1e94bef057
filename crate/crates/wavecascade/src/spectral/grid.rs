use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

pub type Spectrum = Vec<Complex<f64>>;

/// Uniform 2D periodic grid with cached FFT plans and wavenumber tables.
///
/// `kx`/`ky` are the derivative wavenumbers (Nyquist zeroed); `kx_sym`/`ky_sym`
/// keep the Nyquist magnitude and feed even symbols such as |ξ^γ|.
pub struct PeriodicGrid {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    pub kx: Vec<f64>,
    pub ky: Vec<f64>,
    pub kx_sym: Vec<f64>,
    pub ky_sym: Vec<f64>,
    fwd_x: Arc<dyn Fft<f64>>,
    inv_x: Arc<dyn Fft<f64>>,
    fwd_y: Arc<dyn Fft<f64>>,
    inv_y: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for PeriodicGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PeriodicGrid")
            .field("nx", &self.nx)
            .field("ny", &self.ny)
            .field("lx", &self.lx)
            .field("ly", &self.ly)
            .finish()
    }
}

fn wavenumbers(n: usize, l: f64) -> (Vec<f64>, Vec<f64>) {
    let base = 2.0 * std::f64::consts::PI / l;
    let mut deriv = vec![0.0; n];
    let mut sym = vec![0.0; n];
    for i in 0..n {
        let m = if i <= n / 2 { i as f64 } else { i as f64 - n as f64 };
        deriv[i] = base * m;
        sym[i] = base * m;
    }
    // Nyquist: zero for derivatives, magnitude kept for even symbols
    deriv[n / 2] = 0.0;
    sym[n / 2] = base * (n / 2) as f64;
    (deriv, sym)
}

impl PeriodicGrid {
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Arc<Self>> {
        for (name, n) in [("nx", nx), ("ny", ny)] {
            if n < 8 || !n.is_power_of_two() {
                return Err(Error::InvalidInput(format!(
                    "{name} must be a power of two ≥ 8, got {n}"
                )));
            }
        }
        if !(lx > 0.0 && ly > 0.0) {
            return Err(Error::InvalidInput(format!(
                "domain periods must be positive, got lx={lx}, ly={ly}"
            )));
        }
        let mut planner = FftPlanner::new();
        let (kx, kx_sym) = wavenumbers(nx, lx);
        let (ky, ky_sym) = wavenumbers(ny, ly);
        Ok(Arc::new(Self {
            nx,
            ny,
            lx,
            ly,
            kx,
            ky,
            kx_sym,
            ky_sym,
            fwd_x: planner.plan_fft_forward(nx),
            inv_x: planner.plan_fft_inverse(nx),
            fwd_y: planner.plan_fft_forward(ny),
            inv_y: planner.plan_fft_inverse(ny),
        }))
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Horizontal cell area lx·ly/(nx·ny); the quadrature weight of every node.
    pub fn cell_area(&self) -> f64 {
        (self.lx / self.nx as f64) * (self.ly / self.ny as f64)
    }

    pub fn x(&self, ix: usize) -> f64 {
        self.lx * ix as f64 / self.nx as f64
    }

    pub fn y(&self, iy: usize) -> f64 {
        self.ly * iy as f64 / self.ny as f64
    }

    pub fn same_as(&self, other: &Self) -> bool {
        self.nx == other.nx && self.ny == other.ny && self.lx == other.lx && self.ly == other.ly
    }

    /// Forward 2D FFT of real nodal values (unnormalized).
    pub fn forward(&self, values: &[f64]) -> Spectrum {
        debug_assert_eq!(values.len(), self.len());
        let mut buf: Spectrum = values.iter().map(|&v| Complex::new(v, 0.0)).collect();
        self.fft2(&mut buf, true);
        buf
    }

    /// Inverse 2D FFT, returning the real part of the normalized transform.
    pub fn inverse(&self, mut spec: Spectrum) -> Vec<f64> {
        self.fft2(&mut spec, false);
        let scale = 1.0 / self.len() as f64;
        spec.iter().map(|c| c.re * scale).collect()
    }

    /// In-place 2D transform; forward when `fwd`, inverse (unnormalized) otherwise.
    pub fn fft2(&self, buf: &mut Spectrum, fwd: bool) {
        debug_assert_eq!(buf.len(), self.len());
        let (fx, fy) = if fwd {
            (&self.fwd_x, &self.fwd_y)
        } else {
            (&self.inv_x, &self.inv_y)
        };
        for row in buf.chunks_exact_mut(self.nx) {
            fx.process(row);
        }
        let mut col = vec![Complex::default(); self.ny];
        for ix in 0..self.nx {
            for iy in 0..self.ny {
                col[iy] = buf[ix + self.nx * iy];
            }
            fy.process(&mut col);
            for iy in 0..self.ny {
                buf[ix + self.nx * iy] = col[iy];
            }
        }
    }
}
