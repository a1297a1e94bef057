//! Pilot sweeps for the model-vs-reference rate studies; prints errors,
//! fitted slopes and wall time so parameters can be frozen for the
//! acceptance suite.

use std::f64::consts::PI;
use std::time::Instant;

use wavecascade::harness::{
    run_comparison, Bump, CompareSpec, FieldSpec, GridSpec, Horizon, InitialDataSpec, ModelKind,
};
use wavecascade::params::RegimePreset;

fn data_gauss(zamp: f64, pamp: f64) -> InitialDataSpec {
    InitialDataSpec {
        zeta: FieldSpec::one(Bump::Gaussian {
            amp: zamp,
            x0: 0.4,
            y0: 0.5,
            wx: 0.08,
            wy: 0.22,
        }),
        psi: FieldSpec::one(Bump::Gaussian {
            amp: pamp,
            x0: 0.55,
            y0: 0.45,
            wx: 0.1,
            wy: 0.25,
        }),
        bottom: FieldSpec::empty(),
    }
}

fn kp_data(amp: f64, lx: f64) -> InitialDataSpec {
    // zero-mass data: ζ⁰ = amp·sin(x̃)(1 + 0.4cos(ỹ)), ψ⁰ with ∂xψ⁰ = ζ⁰
    let k = 4.0; // index on lx = 8π → physical wavenumber 1/... k̃ = k·2π/lx
    let ktil = k * 2.0 * PI / lx;
    InitialDataSpec {
        zeta: FieldSpec {
            bumps: vec![
                Bump::Mode { amp, kx: k, ky: 0.0, phase: -PI / 2.0 },
                Bump::Mode { amp: 0.2 * amp, kx: k, ky: 1.0, phase: -PI / 2.0 },
                Bump::Mode { amp: 0.2 * amp, kx: k, ky: -1.0, phase: -PI / 2.0 },
            ],
            noise: None,
        },
        psi: FieldSpec {
            bumps: vec![
                Bump::Mode { amp: -amp / ktil, kx: k, ky: 0.0, phase: 0.0 },
                Bump::Mode { amp: -0.2 * amp / ktil, kx: k, ky: 1.0, phase: 0.0 },
                Bump::Mode { amp: -0.2 * amp / ktil, kx: k, ky: -1.0, phase: 0.0 },
            ],
            noise: None,
        },
        bottom: FieldSpec::empty(),
    }
}

fn report(name: &str, spec: &CompareSpec) {
    let t0 = Instant::now();
    match run_comparison(spec) {
        Ok(rep) => {
            let errs: Vec<String> = rep
                .points
                .iter()
                .map(|p| {
                    p.failure
                        .clone()
                        .unwrap_or_else(|| format!("{:.3e}", p.err_linf_zeta))
                })
                .collect();
            let slope = rep.fit.as_ref().map(|f| f.slope).unwrap_or(f64::NAN);
            let resid = rep.fit.as_ref().map(|f| f.residual).unwrap_or(f64::NAN);
            println!(
                "{name}: slope {slope:.3} (resid {resid:.2e}) errs [{}] flags {:?} self {:?} [{:.1}s]",
                errs.join(", "),
                rep.flags,
                rep.meta.get("self_check_ref_err"),
                t0.elapsed().as_secs_f64()
            );
        }
        Err(e) => println!("{name}: FAILED {e} [{:.1}s]", t0.elapsed().as_secs_f64()),
    }
}

fn main() {
    let which: Vec<String> = std::env::args().skip(1).collect();
    let want = |n: &str| which.is_empty() || which.iter().any(|w| w == n);
    let grid = GridSpec {
        nx: 64,
        ny: 16,
        lx: 8.0 * PI,
        ly: 2.0 * PI,
    };
    let threads: usize = std::env::var("PILOT_THREADS").ok().and_then(|v| v.parse().ok()).unwrap_or(4);

    if want("sw") {
        let mut spec = CompareSpec::new(
            RegimePreset::ShallowWater,
            vec![0.1, 0.05, 0.025, 0.0125],
            ModelKind::ShallowWater,
            grid,
        );
        spec.data = data_gauss(0.25, 0.25);
        spec.t_end = 1.0;
        spec.dt = Some(0.05);
        spec.threads = threads;
        report("SW    (want 1.0)", &spec);
    }

    if want("gn") {
        let mut spec = CompareSpec::new(
            RegimePreset::GreenNaghdi,
            vec![0.1, 0.05, 0.025, 0.0125],
            ModelKind::GreenNaghdi,
            grid,
        );
        spec.data = data_gauss(0.25, 0.25);
        spec.t_end = 1.0;
        spec.dt = Some(0.05);
        spec.threads = threads;
        report("GN    (want 2.0)", &spec);
    }

    if want("serre") {
        let mut spec = CompareSpec::new(
            RegimePreset::Serre,
            vec![0.1, 0.05, 0.025, 0.0125],
            ModelKind::Serre,
            grid,
        );
        spec.data = data_gauss(0.4, 0.4);
        spec.t_end = 1.0;
        spec.horizon = Horizon::Regime; // t = 1/√μ
        spec.dt = Some(0.05);
        spec.threads = threads;
        report("Serre (want 1.5)", &spec);
    }

    if want("bq") {
        let mut spec = CompareSpec::new(
            RegimePreset::BoussinesqLongWave,
            vec![0.05, 0.025, 0.0125],
            ModelKind::Boussinesq,
            grid,
        );
        spec.data = data_gauss(0.4, 0.4);
        spec.t_end = 2.0;
        spec.dt = Some(0.05);
        spec.boussinesq = (1.0, 1.0, 0.0);
        spec.threads = threads;
        report("BQ a=(1/3,0,0,0) (want 2.0)", &spec);

        let mut spec2 = spec.clone();
        spec2.boussinesq = ((2.0f64 / 3.0).sqrt(), 0.0, 0.0);
        report("BQ smoothing     (want 2.0)", &spec2);
    }

    if want("fd") {
        let fd_grid = GridSpec { nx: 64, ny: 8, lx: 8.0 * PI, ly: 2.0 * PI };
        let mut spec = CompareSpec::new(
            RegimePreset::FullDispersion { mu: 4.0 },
            vec![0.2, 0.1, 0.05],
            ModelKind::FullDispersion,
            fd_grid,
        );
        spec.data = data_gauss(0.35, 0.35);
        spec.t_end = 1.5;
        spec.horizon = Horizon::Regime; // t = 1.5/ε̃, where the steepness-order bound lives
        spec.dt = Some(0.08);
        spec.threads = threads;
        report("FD    (want 1.0)", &spec);
    }

    if want("kp") {
        let mut spec = CompareSpec::new(
            RegimePreset::KpWeaklyTransverse,
            vec![0.08, 0.04, 0.02],
            ModelKind::Kp,
            grid,
        );
        spec.data = kp_data(0.4, grid.lx);
        spec.t_end = 0.5;
        spec.horizon = Horizon::Regime; // t = 0.5/ε
        spec.threads = threads;
        report("KP    (want decreasing)", &spec);
    }
}
