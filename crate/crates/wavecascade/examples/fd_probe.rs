use std::f64::consts::PI;
use wavecascade::asymptotics::{fd_initial, fd_integrate};
use wavecascade::dnop::DnBackend;
use wavecascade::harness::{make_initial_data, Bump, FieldSpec, GridSpec, InitialDataSpec};
use wavecascade::params::RegimeParams;
use wavecascade::waterwaves::{IntegratorConfig, SurfaceState, WaterWaves};

fn main() {
    let grid = GridSpec { nx: 64, ny: 8, lx: 8.0 * PI, ly: 2.0 * PI }.build().unwrap();
    let data = InitialDataSpec {
        zeta: FieldSpec::one(Bump::Gaussian { amp: 0.35, x0: 0.4, y0: 0.5, wx: 0.08, wy: 0.25 }),
        psi: FieldSpec::one(Bump::Gaussian { amp: 0.35, x0: 0.55, y0: 0.45, wx: 0.1, wy: 0.28 }),
        bottom: FieldSpec::empty(),
    };
    let mu = 4.0f64;
    for etil in [0.2f64, 0.1, 0.05] {
        let eps = etil / mu.sqrt();
        let p = RegimeParams::new(eps, mu, 1.0, 0.0).unwrap();
        let nu = 1.0 / mu.sqrt();
        let (z0, psi0, b) = make_initial_data(&data, &grid, &p, 0.1, 0).unwrap();
        let t_end = 2.0 / etil; // T = 2 at the steepness horizon
        let dt = 0.05;
        let backend = DnBackend::Elliptic { nz: 32, cg_tol: 1e-10, cg_maxiter: 500 };
        let mut ww = WaterWaves::new(&grid, b.clone(), p, Some(nu), 0.1, &backend, true).unwrap();
        let mut cfg = IntegratorConfig::new(dt / 4.0, t_end, backend);
        cfg.snapshot_stride = (t_end / (dt / 4.0) / 8.0) as usize;
        let traj = ww
            .integrate(&SurfaceState { zeta: z0.clone(), psi: psi0.clone(), time: 0.0 }, &cfg)
            .unwrap();
        let state0 = fd_initial(&z0, &psi0, &p);
        let mtraj = fd_integrate(&state0, &p, t_end, dt, (t_end / dt / 8.0) as usize).unwrap();
        print!("etil={etil}: ");
        for (r, m) in traj.snapshots.iter().zip(mtraj.snapshots.iter()) {
            if (r.time - m.time).abs() < 1e-9 {
                print!("t={:.1} e={:.2e}  ", r.time, (&r.zeta - &m.zeta).max_abs());
            }
        }
        println!();
    }
}
