//! Compare ww and sw right-hand sides directly at the initial data.
use std::f64::consts::PI;
use wavecascade::asymptotics::{HyperbolicState, ShallowWater};
use wavecascade::dnop::DnBackend;
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
    for mu in [0.05, 0.0125, 0.003125] {
        let p = RegimeParams::new(1.0, mu, 1.0, 1.0).unwrap();
        let (z0, psi0, b) = make_initial_data(&data, &grid, &p, 0.1, 0).unwrap();
        let backend = DnBackend::Elliptic { nz: 32, cg_tol: 1e-12, cg_maxiter: 500 };
        let mut ww = WaterWaves::new(&grid, b.clone(), p, Some(1.0), 0.1, &backend, true).unwrap();
        let st = SurfaceState { zeta: z0.clone(), psi: psi0.clone(), time: 0.0 };
        let (dz_ww, dpsi_ww) = ww.rhs(&st).unwrap();
        let dv_ww = ops::grad(&dpsi_ww);

        let sw = ShallowWater::new(b.clone(), true);
        let sth = HyperbolicState::new(z0.clone(), ops::grad(&psi0), 0.0);
        let (dz_sw, dv_sw) = sw.rhs(&sth).unwrap();

        println!(
            "mu={mu}: |dzeta_ww - dzeta_sw| = {:.3e}   |dV_ww - dV_sw| = {:.3e}, {:.3e}",
            (&dz_ww - &dz_sw).max_abs(),
            (&dv_ww.x - &dv_sw.x).max_abs(),
            (&dv_ww.y - &dv_sw.y).max_abs()
        );
    }
}
