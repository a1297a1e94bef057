use std::f64::consts::PI;
use wavecascade::dnop::*;
use wavecascade::harness::{make_initial_data, Bump, FieldSpec, GridSpec, InitialDataSpec};
use wavecascade::params::RegimeParams;
use wavecascade::spectral::ops;

fn main() {
    let grid = GridSpec { nx: 64, ny: 16, lx: 8.0 * PI, ly: 2.0 * PI }.build().unwrap();
    let data = InitialDataSpec {
        zeta: FieldSpec::one(Bump::Gaussian { amp: 0.25, x0: 0.4, y0: 0.5, wx: 0.08, wy: 0.22 }),
        psi: FieldSpec::one(Bump::Gaussian { amp: 0.25, x0: 0.55, y0: 0.45, wx: 0.1, wy: 0.25 }),
        bottom: FieldSpec::empty(),
    };
    for mu in [0.1, 0.05, 0.025, 0.0125, 0.003125] {
        let p = RegimeParams::new(1.0, mu, 1.0, 1.0).unwrap();
        let (z0, psi0, b) = make_initial_data(&data, &grid, &p, 0.1, 0).unwrap();
        let geom = StripGeometry::new(z0, b, p, 0.1).unwrap();
        for nz in [16usize, 32] {
            let mut solver = DnElliptic::new(&grid, &p, nz, 1e-12, 800).unwrap();
            let g_ell = solver.apply(&geom, &psi0).unwrap();
            let sh1 = dn_shallow1(&geom, &psi0).unwrap();
            let sh2 = dn_shallow2(&geom, &psi0).unwrap();
            let r1 = (&g_ell - &sh1).max_abs() / mu;
            let r2 = (&g_ell - &sh2).max_abs() / mu;
            print!("mu={mu:<8} nz={nz}: (1/mu)|G-sh1| = {r1:.3e}  (1/mu)|G-sh2| = {r2:.3e}  iters {}   ", solver.last_iterations);
            // modal content of the sh2 remainder: low vs high x-modes
            let diff = (&g_ell - &sh2).scale(1.0 / mu);
            let spec = diff.grid.forward(&diff.values);
            let n = diff.grid.len() as f64;
            let mut low = 0.0f64;
            let mut high = 0.0f64;
            for iy in 0..diff.grid.ny {
                for ix in 0..diff.grid.nx {
                    let m = spec[ix + diff.grid.nx * iy].norm() / n;
                    let kx = diff.grid.kx_sym[ix].abs();
                    if kx <= 2.0 { low = low.max(m); } else { high = high.max(m); }
                }
            }
            println!("remainder modes: low {low:.2e} high {high:.2e}");
        }
    }
}
