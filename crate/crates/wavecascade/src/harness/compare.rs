//! Reference-vs-model error measurement across a regime sweep.
//!
//! For each parameter value the full water-waves system is integrated as
//! the reference (elliptic DN, nz = 32, dt four times smaller than the
//! model's) and the selected asymptotic model is run from its own
//! initial-data map; errors are measured at the matched final time after
//! the model's reconstruction map. The sweep's ζ sup-norm errors are fitted
//! to a power law in the regime parameter.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::initial::{make_initial_data, InitialDataSpec};
use super::report::{fit_rate, ConvergenceReport, PointResult};
use crate::asymptotics::{
    boussinesq_initial, boussinesq_integrate, boussinesq_reconstruct, fd_initial, fd_integrate,
    gn_initial_velocity, gn_integrate, gn_reconstruct, kp_initial, kp_integrate, kp_reconstruct,
    kp_velocity_x, sw_integrate, BoussinesqCoeffs, HyperbolicState,
};
use crate::dnop::DnBackend;
use crate::error::{Error, Result};
use crate::params::{RegimeParams, RegimePreset};
use crate::spectral::{ops, PeriodicGrid, ScalarField, VectorField};
use crate::waterwaves::{auto_dt, IntegratorConfig, SurfaceState, WaterWaves};

/// Reference-solution vertical resolution.
pub const REFERENCE_NZ: usize = 32;
/// Reference dt = model dt / this factor.
pub const REFERENCE_DT_RATIO: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    WaterWaves,
    ShallowWater,
    GreenNaghdi,
    Serre,
    Boussinesq,
    Kp,
    FullDispersion,
}

impl ModelKind {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "water_waves" => Ok(Self::WaterWaves),
            "shallow_water" => Ok(Self::ShallowWater),
            "green_naghdi" => Ok(Self::GreenNaghdi),
            "serre" => Ok(Self::Serre),
            "boussinesq" => Ok(Self::Boussinesq),
            "kp" => Ok(Self::Kp),
            "full_dispersion" => Ok(Self::FullDispersion),
            other => Err(Error::Config(format!("unknown model '{other}'"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::WaterWaves => "water_waves",
            Self::ShallowWater => "shallow_water",
            Self::GreenNaghdi => "green_naghdi",
            Self::Serre => "serre",
            Self::Boussinesq => "boussinesq",
            Self::Kp => "kp",
            Self::FullDispersion => "full_dispersion",
        }
    }

    /// The ν normalization the model's derivation fixes.
    pub fn nu(&self, p: &RegimeParams) -> f64 {
        match self {
            Self::FullDispersion => 1.0 / p.mu.sqrt(),
            Self::WaterWaves => p.nu,
            _ => 1.0,
        }
    }

    /// Horizon scaling: final time = t_end · factor.
    pub fn horizon_factor(&self, p: &RegimeParams) -> f64 {
        match self {
            Self::WaterWaves | Self::ShallowWater => 1.0,
            Self::GreenNaghdi | Self::Serre | Self::Boussinesq | Self::Kp => 1.0 / p.epsilon,
            Self::FullDispersion => 1.0 / p.steepness(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Horizon {
    /// integrate to t_end as given
    Fixed,
    /// integrate to t_end scaled by the model's horizon factor
    Regime,
}

#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
}

impl GridSpec {
    pub fn build(&self) -> Result<Arc<PeriodicGrid>> {
        PeriodicGrid::new(self.nx, self.ny, self.lx, self.ly)
    }
}

#[derive(Debug, Clone)]
pub struct CompareSpec {
    pub preset: RegimePreset,
    pub values: Vec<f64>,
    pub model: ModelKind,
    pub grid: GridSpec,
    pub data: InitialDataSpec,
    pub h0: f64,
    pub t_end: f64,
    pub horizon: Horizon,
    /// model time step; None → stability heuristic
    pub dt: Option<f64>,
    /// (θ, p₁, p₂) for the Boussinesq family
    pub boussinesq: (f64, f64, f64),
    pub nz_ref: usize,
    pub cg_tol: f64,
    pub cg_maxiter: usize,
    /// Sobolev order of the recorded H^s error
    pub error_s: f64,
    /// dt-halving self-check of the reference at the first sweep value
    pub self_check: bool,
    pub threads: usize,
    pub seed: u64,
    pub dealias: bool,
}

impl CompareSpec {
    pub fn new(preset: RegimePreset, values: Vec<f64>, model: ModelKind, grid: GridSpec) -> Self {
        Self {
            preset,
            values,
            model,
            grid,
            data: InitialDataSpec::default(),
            h0: 0.1,
            t_end: 1.0,
            horizon: Horizon::Fixed,
            dt: None,
            boussinesq: (1.0, 1.0, 0.0),
            nz_ref: REFERENCE_NZ,
            cg_tol: 1e-10,
            cg_maxiter: 500,
            error_s: 2.0,
            self_check: true,
            threads: 1,
            seed: 0,
            dealias: true,
        }
    }
}

/// Model stability step size on the given grid.
pub fn model_auto_dt(model: ModelKind, grid: &PeriodicGrid, p: &RegimeParams, amp: f64) -> f64 {
    match model {
        ModelKind::WaterWaves | ModelKind::FullDispersion => auto_dt(grid, p, model.nu(p)),
        ModelKind::Kp => {
            // the stiff linear part is integrated exactly; limit the
            // nonlinear advection (3/2)ζ∂X
            let kcut = 2.0 / 3.0 * std::f64::consts::PI * grid.nx as f64 / grid.lx;
            (0.3 / (1.5 * amp.max(1e-6) * kcut)).min(0.05)
        }
        _ => {
            // unit phase speed models (SW; GN and Boussinesq are slower)
            let dx = (grid.lx / grid.nx as f64).min(grid.ly / grid.ny as f64);
            let kmax = std::f64::consts::PI * (grid.nx as f64 / grid.lx).max(grid.ny as f64 / grid.ly);
            (0.5 * dx).min(2.5 / kmax)
        }
    }
}

struct PointOutcome {
    result: PointResult,
    ref_final: Option<SurfaceState>,
    dt_model: f64,
    t_final: f64,
}

fn reference_run(
    grid: &Arc<PeriodicGrid>,
    b: &ScalarField,
    p: &RegimeParams,
    nu: f64,
    spec: &CompareSpec,
    zeta0: &ScalarField,
    psi0: &ScalarField,
    t_end: f64,
    dt: f64,
) -> Result<SurfaceState> {
    let backend = DnBackend::Elliptic {
        nz: spec.nz_ref,
        cg_tol: spec.cg_tol,
        cg_maxiter: spec.cg_maxiter,
    };
    let mut ww = WaterWaves::new(grid, b.clone(), *p, Some(nu), spec.h0, &backend, spec.dealias)?;
    let cfg = IntegratorConfig::new(dt, t_end, backend);
    let traj = ww.integrate(
        &SurfaceState {
            zeta: zeta0.clone(),
            psi: psi0.clone(),
            time: 0.0,
        },
        &cfg,
    )?;
    Ok(traj.snapshots.into_iter().last().expect("final state"))
}

fn model_errors(
    spec: &CompareSpec,
    reference: &SurfaceState,
    zeta_app: &ScalarField,
    v_app_x: &ScalarField,
    v_app_y: Option<&ScalarField>,
) -> (f64, f64, f64) {
    let v_ref = ops::grad(&reference.psi.zero_mean());
    let dz = &reference.zeta - zeta_app;
    let dvx = &v_ref.x - v_app_x;
    let err_v = match v_app_y {
        Some(vy) => dvx.max_abs().max((&v_ref.y - vy).max_abs()),
        None => dvx.max_abs(),
    };
    (dz.max_abs(), err_v, ops::sobolev_norm(&dz, spec.error_s))
}

fn run_point(spec: &CompareSpec, value: f64) -> PointOutcome {
    match run_point_inner(spec, value) {
        Ok(out) => out,
        Err(e) => PointOutcome {
            result: PointResult {
                param: value,
                err_linf_zeta: f64::NAN,
                err_linf_v: f64::NAN,
                err_hs: f64::NAN,
                failure: Some(e.to_string()),
            },
            ref_final: None,
            dt_model: f64::NAN,
            t_final: f64::NAN,
        },
    }
}

fn run_point_inner(spec: &CompareSpec, value: f64) -> Result<PointOutcome> {
    let p = spec.preset.generate(value)?;
    let grid = spec.grid.build()?;
    let (zeta0, psi0, b) = make_initial_data(&spec.data, &grid, &p, spec.h0, spec.seed)?;
    let nu = spec.model.nu(&p);
    let t_end = match spec.horizon {
        Horizon::Fixed => spec.t_end,
        Horizon::Regime => spec.t_end * spec.model.horizon_factor(&p),
    };
    let amp = zeta0.max_abs().max(1e-6);
    let dt_model = spec.dt.unwrap_or_else(|| model_auto_dt(spec.model, &grid, &p, amp));
    // land the model and the reference on the exact same final time: round
    // t_end up to a whole number of model steps (the reference step divides
    // the model step, so it lands there too)
    let (t_final, dt_model, dt_ref) = match spec.model {
        ModelKind::Kp => {
            // the KP model steps in the slow time τ = εt with its own step;
            // align the reference on t_final and the pair on ε·t_final
            let dt_ref_base = auto_dt(&grid, &p, nu) / REFERENCE_DT_RATIO;
            let n_ref = (t_end / dt_ref_base - 1e-9).ceil().max(1.0);
            let t_final = n_ref * dt_ref_base;
            let tau_end = p.epsilon * t_final;
            let n_tau = (tau_end / dt_model - 1e-9).ceil().max(1.0);
            (t_final, tau_end / n_tau, dt_ref_base)
        }
        _ => {
            let nsteps = (t_end / dt_model - 1e-9).ceil().max(1.0);
            (nsteps * dt_model, dt_model, dt_model / REFERENCE_DT_RATIO)
        }
    };
    let t_end = t_final;

    let reference = reference_run(&grid, &b, &p, nu, spec, &zeta0, &psi0, t_end, dt_ref)?;

    let (zeta_app, vx, vy) = match spec.model {
        ModelKind::WaterWaves => {
            // self-comparison at the model's own step size
            let backend = DnBackend::Elliptic {
                nz: spec.nz_ref,
                cg_tol: spec.cg_tol,
                cg_maxiter: spec.cg_maxiter,
            };
            let mut ww =
                WaterWaves::new(&grid, b.clone(), p, Some(nu), spec.h0, &backend, spec.dealias)?;
            let cfg = IntegratorConfig::new(dt_model, t_end, backend);
            let traj = ww.integrate(
                &SurfaceState {
                    zeta: zeta0.clone(),
                    psi: psi0.clone(),
                    time: 0.0,
                },
                &cfg,
            )?;
            let last = traj.snapshots.into_iter().last().expect("final state");
            let v = ops::grad(&last.psi.zero_mean());
            (last.zeta, v.x, Some(v.y))
        }
        ModelKind::ShallowWater => {
            let state0 = HyperbolicState::new(zeta0.clone(), ops::grad(&psi0), 0.0);
            let traj = sw_integrate(&state0, &b, t_end, dt_model, usize::MAX)?;
            let last = traj.last();
            (last.zeta.clone(), last.v.x.clone(), Some(last.v.y.clone()))
        }
        ModelKind::GreenNaghdi | ModelKind::Serre => {
            let v0 = gn_initial_velocity(&zeta0, &psi0, &b, &p)?;
            let state0 = HyperbolicState::new(zeta0.clone(), v0, 0.0);
            let traj = gn_integrate(&state0, &b, &p, t_end, dt_model, usize::MAX)?;
            let last = traj.last();
            let v = gn_reconstruct(last, &b, &p);
            (last.zeta.clone(), v.x, Some(v.y))
        }
        ModelKind::Boussinesq => {
            let (theta, p1, p2) = spec.boussinesq;
            let coeffs = BoussinesqCoeffs::new(theta, p1, p2)?;
            let state0 = boussinesq_initial(&zeta0, &psi0, &b, p.epsilon, theta)?;
            let traj = boussinesq_integrate(&state0, &b, &coeffs, p.epsilon, t_end, dt_model, usize::MAX)?;
            let (z_app, v_app) = boussinesq_reconstruct(traj.last(), &b, p.epsilon, theta);
            (z_app, v_app.x, Some(v_app.y))
        }
        ModelKind::Kp => {
            let pair0 = kp_initial(&zeta0, &psi0)?;
            let tau_end = p.epsilon * t_end;
            let states = kp_integrate(&pair0, tau_end, dt_model, usize::MAX)?;
            let last = states.last().expect("final state");
            let z_app = kp_reconstruct(last, t_end, &grid);
            let v_app = kp_velocity_x(last, t_end, &grid);
            (z_app, v_app, None)
        }
        ModelKind::FullDispersion => {
            let state0 = fd_initial(&zeta0, &psi0, &p);
            let traj = fd_integrate(&state0, &p, t_end, dt_model, usize::MAX)?;
            let last = traj.last();
            (last.zeta.clone(), last.v.x.clone(), Some(last.v.y.clone()))
        }
    };
    let (ez, ev, ehs) = model_errors(spec, &reference, &zeta_app, &vx, vy.as_ref());
    Ok(PointOutcome {
        result: PointResult {
            param: value,
            err_linf_zeta: ez,
            err_linf_v: ev,
            err_hs: ehs,
            failure: None,
        },
        ref_final: Some(reference),
        dt_model,
        t_final: t_end,
    })
}

/// Run the sweep and assemble the report. Points execute on a bounded
/// worker pool; the aggregation order is the parameter order, so thread
/// count does not affect any reported number.
pub fn run_comparison(spec: &CompareSpec) -> Result<ConvergenceReport> {
    if spec.values.is_empty() {
        return Err(Error::Config("comparison sweep needs at least one value".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let outcomes: Vec<PointOutcome> =
        pool.install(|| spec.values.par_iter().map(|v| run_point(spec, *v)).collect());

    let mut report = ConvergenceReport {
        points: outcomes.iter().map(|o| o.result.clone()).collect(),
        fit: None,
        flags: Vec::new(),
        meta: BTreeMap::new(),
    };
    report.fit_on_zeta();

    // dt-halving self-check of the reference at the first sweep value
    if spec.self_check {
        if let (Some(first), Some(ref_final)) = (outcomes.first(), outcomes[0].ref_final.as_ref()) {
            if first.result.failure.is_none() {
                let p = spec.preset.generate(spec.values[0])?;
                let grid = spec.grid.build()?;
                let (zeta0, psi0, b) = make_initial_data(&spec.data, &grid, &p, spec.h0, spec.seed)?;
                let halved = reference_run(
                    &grid,
                    &b,
                    &p,
                    spec.model.nu(&p),
                    spec,
                    &zeta0,
                    &psi0,
                    first.t_final,
                    first.dt_model / REFERENCE_DT_RATIO / 2.0,
                )?;
                let self_err = (&halved.zeta - &ref_final.zeta).max_abs();
                report
                    .meta
                    .insert("self_check_ref_err".into(), format!("{self_err:.3e}"));
                let min_model_err = report
                    .points
                    .iter()
                    .filter(|p| p.failure.is_none())
                    .map(|p| p.err_linf_zeta)
                    .fold(f64::INFINITY, f64::min);
                if self_err > 0.1 * min_model_err {
                    report.flags.push(format!(
                        "reference discretization error {self_err:.3e} is not far below the \
                         smallest model error {min_model_err:.3e}"
                    ));
                }
            }
        }
    }

    populate_meta(spec, &outcomes, &mut report.meta);
    Ok(report)
}

fn populate_meta(spec: &CompareSpec, outcomes: &[PointOutcome], meta: &mut BTreeMap<String, String>) {
    let ins = |meta: &mut BTreeMap<String, String>, k: &str, v: String| {
        meta.insert(k.to_string(), v);
    };
    ins(meta, "kind", "compare".into());
    ins(meta, "model", spec.model.name().into());
    ins(meta, "preset", spec.preset.name().into());
    ins(meta, "values", join_floats(&spec.values));
    ins(meta, "grid_nx", spec.grid.nx.to_string());
    ins(meta, "grid_ny", spec.grid.ny.to_string());
    ins(meta, "grid_lx", format!("{:.16e}", spec.grid.lx));
    ins(meta, "grid_ly", format!("{:.16e}", spec.grid.ly));
    ins(meta, "h0", format!("{}", spec.h0));
    ins(meta, "t_end", format!("{}", spec.t_end));
    ins(
        meta,
        "horizon",
        match spec.horizon {
            Horizon::Fixed => "fixed".into(),
            Horizon::Regime => "regime".into(),
        },
    );
    ins(
        meta,
        "dt_model",
        join_floats(&outcomes.iter().map(|o| o.dt_model).collect::<Vec<_>>()),
    );
    ins(
        meta,
        "t_final",
        join_floats(&outcomes.iter().map(|o| o.t_final).collect::<Vec<_>>()),
    );
    ins(meta, "reference_backend", "elliptic".into());
    ins(meta, "reference_nz", spec.nz_ref.to_string());
    ins(meta, "reference_dt_ratio", format!("{REFERENCE_DT_RATIO}"));
    ins(meta, "cg_tol", format!("{:e}", spec.cg_tol));
    ins(meta, "cg_maxiter", spec.cg_maxiter.to_string());
    ins(meta, "error_hs_order", format!("{}", spec.error_s));
    ins(meta, "error_norms", "linf,hs".into());
    ins(meta, "dealias_rule", "2/3".into());
    ins(meta, "nyquist_derivative", "zeroed".into());
    ins(meta, "quadrature", "trapezoid".into());
    ins(meta, "zero_mean_projection", "true".into());
    ins(meta, "preconditioner", "flat_strip".into());
    ins(meta, "slope_bracket", "0.3".into());
    ins(meta, "boussinesq_theta_p1_p2", format!("{:?}", spec.boussinesq));
    ins(meta, "seed", spec.seed.to_string());
    ins(meta, "threads", spec.threads.to_string());
    ins(meta, "build_id", concat!("wavecascade-", env!("CARGO_PKG_VERSION")).into());
}

pub(crate) fn join_floats(v: &[f64]) -> String {
    v.iter()
        .map(|x| format!("{x}"))
        .collect::<Vec<_>>()
        .join(";")
}

/// Backend remainder study: sup/H^s distance between the elliptic operator
/// and an expansion backend across the sweep, with running slopes.
#[derive(Debug, Clone)]
pub struct DnStudySpec {
    pub preset: RegimePreset,
    pub values: Vec<f64>,
    pub target: DnBackend,
    pub grid: GridSpec,
    pub data: InitialDataSpec,
    pub h0: f64,
    pub nz_ref: usize,
    pub cg_tol: f64,
    pub cg_maxiter: usize,
    pub error_s: f64,
    pub seed: u64,
    pub threads: usize,
}

pub struct DnStudyRow {
    pub param: f64,
    pub error_hs: f64,
    pub slope_running: Option<f64>,
}

pub fn run_dn_study(spec: &DnStudySpec) -> Result<(Vec<DnStudyRow>, BTreeMap<String, String>)> {
    if spec.values.is_empty() {
        return Err(Error::Config("dn study needs at least one value".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let errors: Vec<Result<f64>> = pool.install(|| {
        spec.values
            .par_iter()
            .map(|&value| -> Result<f64> {
                let p = spec.preset.generate(value)?;
                let grid = spec.grid.build()?;
                let (zeta0, psi0, b) = make_initial_data(&spec.data, &grid, &p, spec.h0, spec.seed)?;
                let geom = crate::dnop::StripGeometry::new(zeta0, b, p, spec.h0)?;
                let reference = crate::dnop::dn_apply(
                    &geom,
                    &psi0,
                    &DnBackend::Elliptic {
                        nz: spec.nz_ref,
                        cg_tol: spec.cg_tol,
                        cg_maxiter: spec.cg_maxiter,
                    },
                )?;
                let target = crate::dnop::dn_apply(&geom, &psi0, &spec.target)?;
                Ok(ops::sobolev_norm(&(&reference - &target), spec.error_s))
            })
            .collect()
    });
    let mut errs = Vec::new();
    for e in errors {
        errs.push(e?);
    }
    let slopes = super::report::running_slopes(&spec.values, &errs);
    let rows = spec
        .values
        .iter()
        .zip(&errs)
        .zip(slopes)
        .map(|((&param, &error_hs), slope_running)| DnStudyRow {
            param,
            error_hs,
            slope_running,
        })
        .collect();
    let mut meta = BTreeMap::new();
    meta.insert("kind".to_string(), "dn_study".to_string());
    meta.insert("preset".to_string(), spec.preset.name().to_string());
    meta.insert("target".to_string(), format!("{:?}", spec.target));
    meta.insert("reference_nz".to_string(), spec.nz_ref.to_string());
    meta.insert("cg_tol".to_string(), format!("{:e}", spec.cg_tol));
    meta.insert("error_hs_order".to_string(), format!("{}", spec.error_s));
    Ok((rows, meta))
}

/// Convenience: fit the dn-study rows to a power law.
pub fn dn_study_slope(rows: &[DnStudyRow]) -> Result<f64> {
    let params: Vec<f64> = rows.iter().map(|r| r.param).collect();
    let errs: Vec<f64> = rows.iter().map(|r| r.error_hs).collect();
    Ok(fit_rate(&params, &errs)?.slope)
}

#[allow(dead_code)]
fn _assert_sync(v: VectorField) -> VectorField {
    v
}
