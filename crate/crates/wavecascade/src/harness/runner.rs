//! Single-run, sweep, and Taylor-check experiment drivers plus their
//! artifact writers (diagnostics stream, field snapshots, report.meta).

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use super::compare::{model_auto_dt, CompareSpec, ModelKind};
use super::initial::make_initial_data;
use super::report::write_meta;
use crate::asymptotics::{
    boussinesq_initial, boussinesq_integrate, boussinesq_reconstruct, fd_initial, fd_integrate,
    gn_initial_velocity, gn_integrate, kp_initial, kp_integrate, kp_reconstruct, model_mass,
    sw_integrate, BoussinesqCoeffs, HyperbolicState, ModelTrajectory,
};
use crate::dnop::{taylor_check, DnBackend, StripGeometry, TaylorReport};
use crate::error::{Error, Result};
use crate::params::RegimeParams;
use crate::spectral::{io, ops, ScalarField};
use crate::waterwaves::{IntegratorConfig, SurfaceState, WaterWaves};

/// Summary of one simulation run.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub param: f64,
    pub steps: usize,
    pub t_final: f64,
    pub linf_zeta: f64,
    pub mass_drift: f64,
    pub energy_drift: f64,
}

fn diag_header(model: &str) -> String {
    format!("# model={model}\nt,mass,hamiltonian,linf_zeta,min_depth")
}

fn fmt(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "nan".to_string()
    }
}

/// Quadratic energy ½∫ζ² + ½∫(1+ε(ζ−b))|V|² used as the diagnostics column
/// for the hyperbolic models.
fn model_energy(state: &HyperbolicState, b: &ScalarField, eps: f64) -> f64 {
    let mut h = ScalarField::constant(&state.zeta.grid, 1.0);
    h.axpy(eps, &state.zeta);
    h.axpy(-eps, b);
    let v2 = state.v.dot(&state.v);
    0.5 * ops::inner(&state.zeta, &state.zeta) + 0.5 * ops::inner(&h, &v2)
}

fn write_model_diagnostics(
    path: &Path,
    model: &str,
    traj: &ModelTrajectory,
    b: &ScalarField,
    eps: f64,
) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "{}", diag_header(model))?;
    for s in &traj.snapshots {
        let mut depth = ScalarField::constant(&s.zeta.grid, 1.0);
        depth.axpy(eps, &s.zeta);
        depth.axpy(-eps, b);
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt(s.time),
            fmt(model_mass(s)),
            fmt(model_energy(s, b, eps)),
            fmt(s.zeta.max_abs()),
            fmt(depth.min())
        )?;
    }
    Ok(())
}

fn snapshot_fields(
    dir: &Path,
    label: &str,
    idx: usize,
    fields: &[(&str, &ScalarField)],
) -> Result<()> {
    for (name, field) in fields {
        let path = dir.join(format!("{label}_{idx:05}_{name}.field"));
        io::save_field(&path, field)?;
    }
    Ok(())
}

/// Run one simulation of the selected model (first sweep value), writing
/// `diagnostics.csv`, optional field snapshots, and returning a summary.
pub fn run_simulate(
    spec: &CompareSpec,
    out_dir: &Path,
    nu_override: Option<f64>,
    snapshot_stride: usize,
    write_snapshots: bool,
) -> Result<RunSummary> {
    std::fs::create_dir_all(out_dir)?;
    let value = *spec
        .values
        .first()
        .ok_or_else(|| Error::Config("simulate needs one regime value".into()))?;
    let p = spec.preset.generate(value)?;
    let grid = spec.grid.build()?;
    let (zeta0, psi0, b) = make_initial_data(&spec.data, &grid, &p, spec.h0, spec.seed)?;
    let amp = zeta0.max_abs().max(1e-6);
    let dt = spec.dt.unwrap_or_else(|| model_auto_dt(spec.model, &grid, &p, amp));
    let t_end = match spec.horizon {
        super::compare::Horizon::Fixed => spec.t_end,
        super::compare::Horizon::Regime => spec.t_end * spec.model.horizon_factor(&p),
    };
    let diag_path = out_dir.join("diagnostics.csv");

    let summary = match spec.model {
        ModelKind::WaterWaves => {
            let nu = nu_override.unwrap_or(p.nu);
            let backend = DnBackend::Elliptic {
                nz: spec.nz_ref,
                cg_tol: spec.cg_tol,
                cg_maxiter: spec.cg_maxiter,
            };
            // warn when the Taylor-sign check was not run on bumpy bottoms
            if b.max_abs() > 0.0 {
                let geom = StripGeometry::new(zeta0.clone(), b.clone(), p, spec.h0)?;
                let rep = taylor_check(&geom, &psi0, &backend)?;
                if !rep.passes {
                    eprintln!(
                        "warning: Taylor-sign sufficient check fails (hessian_margin={:?}, depth_margin={:?})",
                        rep.hessian_margin, rep.depth_margin
                    );
                }
            }
            let mut ww =
                WaterWaves::new(&grid, b.clone(), p, Some(nu), spec.h0, &backend, spec.dealias)?;
            let mut cfg = IntegratorConfig::new(dt, t_end, backend);
            cfg.snapshot_stride = snapshot_stride;
            cfg.with_diagnostics = true;
            let state0 = SurfaceState {
                zeta: zeta0.clone(),
                psi: psi0,
                time: 0.0,
            };
            let traj = ww.integrate(&state0, &cfg)?;
            let mut w = std::io::BufWriter::new(std::fs::File::create(&diag_path)?);
            writeln!(w, "{}", diag_header("water_waves"))?;
            for d in &traj.diagnostics {
                writeln!(
                    w,
                    "{},{},{},{},{}",
                    fmt(d.t),
                    fmt(d.mass),
                    fmt(d.hamiltonian),
                    fmt(d.linf_zeta),
                    fmt(d.min_depth)
                )?;
            }
            drop(w);
            if write_snapshots {
                for (i, s) in traj.snapshots.iter().enumerate() {
                    snapshot_fields(out_dir, "ww", i, &[("zeta", &s.zeta), ("psi", &s.psi)])?;
                }
            }
            let d0 = traj.diagnostics.first();
            let dl = traj.diagnostics.last();
            RunSummary {
                param: value,
                steps: traj.steps,
                t_final: traj.last().time,
                linf_zeta: traj.last().zeta.max_abs(),
                mass_drift: match (d0, dl) {
                    (Some(a), Some(b)) => (b.mass - a.mass).abs(),
                    _ => 0.0,
                },
                energy_drift: match (d0, dl) {
                    (Some(a), Some(b)) => (b.hamiltonian - a.hamiltonian).abs(),
                    _ => 0.0,
                },
            }
        }
        ModelKind::Kp => {
            let pair0 = kp_initial(&zeta0, &psi0)?;
            let tau_end = p.epsilon * t_end;
            let states = kp_integrate(&pair0, tau_end, dt, snapshot_stride)?;
            let mut w = std::io::BufWriter::new(std::fs::File::create(&diag_path)?);
            writeln!(w, "{}", diag_header("kp"))?;
            for s in &states {
                let t = if p.epsilon > 0.0 { s.tau / p.epsilon } else { 0.0 };
                let recon = kp_reconstruct(s, t, &grid);
                let l2p = ops::l2_norm(&s.zeta_plus);
                let l2m = ops::l2_norm(&s.zeta_minus);
                let mut depth = ScalarField::constant(&grid, 1.0);
                depth.axpy(p.epsilon, &recon);
                writeln!(
                    w,
                    "{},{},{},{},{}",
                    fmt(t),
                    fmt(model_mass(&HyperbolicState::new(
                        recon.clone(),
                        crate::spectral::VectorField::zeros(&grid),
                        t
                    ))),
                    fmt(0.5 * (l2p * l2p + l2m * l2m)),
                    fmt(recon.max_abs()),
                    fmt(depth.min())
                )?;
            }
            drop(w);
            if write_snapshots {
                for (i, s) in states.iter().enumerate() {
                    snapshot_fields(
                        out_dir,
                        "kp",
                        i,
                        &[("zeta_plus", &s.zeta_plus), ("zeta_minus", &s.zeta_minus)],
                    )?;
                }
            }
            let last = states.last().expect("kp state");
            let first = states.first().expect("kp state");
            let l2 = |s: &crate::asymptotics::KpPairState| {
                let a = ops::l2_norm(&s.zeta_plus);
                let b = ops::l2_norm(&s.zeta_minus);
                0.5 * (a * a + b * b)
            };
            RunSummary {
                param: value,
                steps: ((tau_end / dt) as usize).max(1),
                t_final: t_end,
                linf_zeta: kp_reconstruct(last, t_end, &grid).max_abs(),
                mass_drift: 0.0,
                energy_drift: (l2(last) - l2(first)).abs(),
            }
        }
        _ => {
            let traj = run_hyperbolic_model(spec, &p, &zeta0, &psi0, &b, t_end, dt, snapshot_stride)?;
            write_model_diagnostics(&diag_path, spec.model.name(), &traj, &b, p.epsilon)?;
            if write_snapshots {
                for (i, s) in traj.snapshots.iter().enumerate() {
                    snapshot_fields(
                        out_dir,
                        spec.model.name(),
                        i,
                        &[("zeta", &s.zeta), ("vx", &s.v.x), ("vy", &s.v.y)],
                    )?;
                }
            }
            let first = traj.snapshots.first().expect("state");
            let last = traj.last();
            RunSummary {
                param: value,
                steps: traj.steps,
                t_final: last.time,
                linf_zeta: last.zeta.max_abs(),
                mass_drift: (model_mass(last) - model_mass(first)).abs(),
                energy_drift: (model_energy(last, &b, p.epsilon)
                    - model_energy(first, &b, p.epsilon))
                .abs(),
            }
        }
    };
    Ok(summary)
}

#[allow(clippy::too_many_arguments)]
fn run_hyperbolic_model(
    spec: &CompareSpec,
    p: &RegimeParams,
    zeta0: &ScalarField,
    psi0: &ScalarField,
    b: &ScalarField,
    t_end: f64,
    dt: f64,
    stride: usize,
) -> Result<ModelTrajectory> {
    match spec.model {
        ModelKind::ShallowWater => {
            let state0 = HyperbolicState::new(zeta0.clone(), ops::grad(psi0), 0.0);
            sw_integrate(&state0, b, t_end, dt, stride)
        }
        ModelKind::GreenNaghdi | ModelKind::Serre => {
            let v0 = gn_initial_velocity(zeta0, psi0, b, p)?;
            gn_integrate(&HyperbolicState::new(zeta0.clone(), v0, 0.0), b, p, t_end, dt, stride)
        }
        ModelKind::Boussinesq => {
            let (theta, p1, p2) = spec.boussinesq;
            let coeffs = BoussinesqCoeffs::new(theta, p1, p2)?;
            if let Some(warn) = coeffs.stability_warning() {
                eprintln!("warning: {warn}");
            }
            let state0 = boussinesq_initial(zeta0, psi0, b, p.epsilon, theta)?;
            let traj = boussinesq_integrate(&state0, b, &coeffs, p.epsilon, t_end, dt, stride)?;
            // keep snapshots in reconstructed variables for comparability
            let snapshots = traj
                .snapshots
                .iter()
                .map(|s| {
                    let (z, v) = boussinesq_reconstruct(s, b, p.epsilon, theta);
                    HyperbolicState::new(z, v, s.time)
                })
                .collect();
            Ok(ModelTrajectory {
                snapshots,
                steps: traj.steps,
            })
        }
        ModelKind::FullDispersion => {
            let state0 = fd_initial(zeta0, psi0, p);
            fd_integrate(&state0, p, t_end, dt, stride)
        }
        ModelKind::WaterWaves | ModelKind::Kp => unreachable!("handled by run_simulate"),
    }
}

/// Run the model across all sweep values, one summary row per value.
pub fn run_sweep(spec: &CompareSpec, out_dir: &Path) -> Result<Vec<RunSummary>> {
    std::fs::create_dir_all(out_dir)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    use rayon::prelude::*;
    let results: Vec<Result<RunSummary>> = pool.install(|| {
        spec.values
            .par_iter()
            .enumerate()
            .map(|(i, &v)| {
                let mut one = spec.clone();
                one.values = vec![v];
                let sub = out_dir.join(format!("point_{i:03}"));
                run_simulate(&one, &sub, None, usize::MAX, false)
            })
            .collect()
    });
    results.into_iter().collect()
}

pub fn write_sweep_csv(path: &Path, rows: &[RunSummary]) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "param,steps,t_final,linf_zeta,mass_drift,energy_drift")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            fmt(r.param),
            r.steps,
            fmt(r.t_final),
            fmt(r.linf_zeta),
            fmt(r.mass_drift),
            fmt(r.energy_drift)
        )?;
    }
    Ok(())
}

/// Taylor-sign check on the configured initial data.
pub fn run_taylor_check(spec: &CompareSpec, out_dir: &Path) -> Result<TaylorReport> {
    std::fs::create_dir_all(out_dir)?;
    let value = *spec
        .values
        .first()
        .ok_or_else(|| Error::Config("taylor_check needs one regime value".into()))?;
    let p = spec.preset.generate(value)?;
    let grid = spec.grid.build()?;
    let (zeta0, psi0, b) = make_initial_data(&spec.data, &grid, &p, spec.h0, spec.seed)?;
    let geom = StripGeometry::new(zeta0, b, p, spec.h0)?;
    let backend = DnBackend::Elliptic {
        nz: spec.nz_ref,
        cg_tol: spec.cg_tol,
        cg_maxiter: spec.cg_maxiter,
    };
    let report = taylor_check(&geom, &psi0, &backend)?;
    let mut meta = BTreeMap::new();
    meta.insert("kind".to_string(), "taylor_check".to_string());
    meta.insert("preset".to_string(), spec.preset.name().to_string());
    meta.insert("hessian_margin".to_string(), format!("{:?}", report.hessian_margin));
    meta.insert("depth_margin".to_string(), format!("{:?}", report.depth_margin));
    meta.insert("passes".to_string(), report.passes.to_string());
    write_meta(&out_dir.join("report.meta"), &meta)?;
    Ok(report)
}
