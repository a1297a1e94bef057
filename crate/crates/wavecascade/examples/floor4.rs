use std::f64::consts::PI;
use wavecascade::asymptotics::{HyperbolicState, ShallowWater};
use wavecascade::dnop::*;
use wavecascade::harness::{make_initial_data, Bump, FieldSpec, GridSpec, InitialDataSpec};
use wavecascade::params::RegimeParams;
use wavecascade::spectral::ops;
use wavecascade::waterwaves::{SurfaceState, WaterWaves};

fn main() {
    let grid = GridSpec { nx: 64, ny: 16, lx: 8.0 * PI, ly: 2.0 * PI }.build().unwrap();
    let data = InitialDataSpec {
        zeta: FieldSpec::one(Bump::Gaussian { amp: 0.25, x0: 0.4, y0: 0.5, wx: 0.08, wy: 0.22 }),
        psi: FieldSpec::one(Bump::Gaussian { amp: 0.25, x0: 0.55, y0: 0.45, wx: 0.1, wy: 0.25 }),
        bottom: FieldSpec::empty(),
    };
    let mu = 0.003125;
    let p = RegimeParams::new(1.0, mu, 1.0, 1.0).unwrap();
    let (z0, psi0, b) = make_initial_data(&data, &grid, &p, 0.1, 0).unwrap();
    let geom = StripGeometry::new(z0.clone(), b.clone(), p, 0.1).unwrap();

    let backend = DnBackend::Elliptic { nz: 32, cg_tol: 1e-12, cg_maxiter: 800 };
    let mut ww = WaterWaves::new(&grid, b.clone(), p, Some(1.0), 0.1, &backend, true).unwrap();
    let st = SurfaceState { zeta: z0.clone(), psi: psi0.clone(), time: 0.0 };
    let (dz_ww, _) = ww.rhs(&st).unwrap();

    let mut solver = DnElliptic::new(&grid, &p, 32, 1e-12, 800).unwrap();
    let g_ell = solver.apply(&geom, &psi0).unwrap();
    let direct = g_ell.scale(1.0 / mu);
    println!("|dz_ww - (1/mu)G_ell|      = {:.3e}", (&dz_ww - &direct).max_abs());

    let sh1 = dn_shallow1(&geom, &psi0).unwrap().scale(1.0 / mu);
    println!("|(1/mu)G_ell - (1/mu)sh1|  = {:.3e}", (&direct - &sh1).max_abs());

    let sw = ShallowWater::new(b.clone(), true);
    let sth = HyperbolicState::new(z0.clone(), ops::grad(&psi0), 0.0);
    let (dz_sw, _) = sw.rhs(&sth).unwrap();
    println!("|dz_sw - (1/mu)sh1|        = {:.3e}", (&dz_sw - &sh1).max_abs());
    println!("|dz_ww - dz_sw|            = {:.3e}", (&dz_ww - &dz_sw).max_abs());
}
