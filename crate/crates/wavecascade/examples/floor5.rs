use std::f64::consts::PI;
use wavecascade::harness::{make_initial_data, Bump, FieldSpec, GridSpec, InitialDataSpec};
use wavecascade::params::RegimeParams;
use wavecascade::spectral::{ops, ScalarField};

fn main() {
    let grid = GridSpec { nx: 64, ny: 16, lx: 8.0 * PI, ly: 2.0 * PI }.build().unwrap();
    let data = InitialDataSpec {
        zeta: FieldSpec::one(Bump::Gaussian { amp: 0.25, x0: 0.4, y0: 0.5, wx: 0.08, wy: 0.22 }),
        psi: FieldSpec::one(Bump::Gaussian { amp: 0.25, x0: 0.55, y0: 0.45, wx: 0.1, wy: 0.25 }),
        bottom: FieldSpec::empty(),
    };
    let p = RegimeParams::new(1.0, 0.003125, 1.0, 1.0).unwrap();
    let (z0, psi0, b) = make_initial_data(&data, &grid, &p, 0.1, 0).unwrap();

    let mut h = ScalarField::constant(&grid, 1.0);
    h.axpy(1.0, &z0);
    h.axpy(-1.0, &b);

    let g = ops::grad(&psi0);
    // path A: div(h * grad psi) raw
    let a = ops::div(&g.mul_scalar(&h));
    // path B: div of dealiased products
    let fx = ops::prod(&h, &g.x, true);
    let fy = ops::prod(&h, &g.y, true);
    let bfield = ops::div(&wavecascade::spectral::VectorField::new(fx.clone(), fy.clone()));
    println!("|A - B| = {:.3e}", (&a - &bfield).max_abs());
    println!("|A| = {:.3e}, |B| = {:.3e}", a.max_abs(), bfield.max_abs());
    // dealias removal content
    let raw_fx = h.mul_field(&g.x);
    println!("|dealias removal on h*gx| = {:.3e}", (&raw_fx - &fx).max_abs());
    println!("gx max {:.3e}, gy max {:.3e}, h-1 max {:.3e}", g.x.max_abs(), g.y.max_abs(), h.map(|v| v - 1.0).max_abs());
    // wait: is psi0's gradient what we think? print a few spectra magnitudes
    let spec = grid.forward(&psi0.values);
    let n = grid.len() as f64;
    for k in [0usize, 4, 8, 12, 16, 20, 21, 22, 24, 28, 31] {
        println!("psi x-mode {k}: {:.3e}", spec[k].norm() / n);
    }
}
