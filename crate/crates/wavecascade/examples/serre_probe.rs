use std::f64::consts::PI;
use wavecascade::asymptotics::{gn_initial_velocity, gn_integrate, gn_reconstruct, HyperbolicState};
use wavecascade::dnop::DnBackend;
use wavecascade::harness::{make_initial_data, Bump, FieldSpec, GridSpec, InitialDataSpec};
use wavecascade::params::RegimeParams;
use wavecascade::spectral::ops;
use wavecascade::waterwaves::{IntegratorConfig, SurfaceState, WaterWaves};

fn main() {
    let grid = GridSpec { nx: 64, ny: 16, lx: 8.0 * PI, ly: 2.0 * PI }.build().unwrap();
    let data = InitialDataSpec {
        zeta: FieldSpec::one(Bump::Gaussian { amp: 0.4, x0: 0.4, y0: 0.5, wx: 0.08, wy: 0.22 }),
        psi: FieldSpec::one(Bump::Gaussian { amp: 0.4, x0: 0.55, y0: 0.45, wx: 0.1, wy: 0.25 }),
        bottom: FieldSpec::empty(),
    };
    for mu in [0.1f64, 0.05, 0.025, 0.0125] {
        let eps = mu.sqrt();
        let p = RegimeParams::new(eps, mu, 1.0, eps).unwrap();
        let (z0, psi0, b) = make_initial_data(&data, &grid, &p, 0.1, 0).unwrap();
        let t_end = 1.0 / eps;
        let dt = 0.05;
        let backend = DnBackend::Elliptic { nz: 32, cg_tol: 1e-10, cg_maxiter: 500 };
        let mut ww = WaterWaves::new(&grid, b.clone(), p, Some(1.0), 0.1, &backend, true).unwrap();
        let mut cfg = IntegratorConfig::new(dt / 4.0, t_end, backend);
        cfg.snapshot_stride = ((t_end / (dt / 4.0)) / 4.0) as usize;
        let traj = ww.integrate(&SurfaceState { zeta: z0.clone(), psi: psi0.clone(), time: 0.0 }, &cfg).unwrap();

        let v0 = gn_initial_velocity(&z0, &psi0, &b, &p).unwrap();
        let state0 = HyperbolicState::new(z0.clone(), v0, 0.0);
        let mtraj = gn_integrate(&state0, &b, &p, t_end, dt, ((t_end / dt) / 4.0) as usize).unwrap();
        print!("mu={mu:<7} t_end={t_end:.3}: ");
        for (s_ref, s_m) in traj.snapshots.iter().zip(mtraj.snapshots.iter()) {
            let err = (&s_ref.zeta - &s_m.zeta).max_abs();
            print!("t={:.2} e={:.2e}  ", s_ref.time, err);
        }
        let last_ref = traj.snapshots.last().unwrap();
        let last_m = mtraj.snapshots.last().unwrap();
        let vrec = gn_reconstruct(last_m, &b, &p);
        let vref = ops::grad(&last_ref.psi.zero_mean());
        println!("| v_err={:.2e} t_ref={:.4} t_m={:.4}", (&vref.x - &vrec.x).max_abs(), last_ref.time, last_m.time);
    }
}
