//! Command-line entry: `wavecascade <subcommand> --config <path>` with
//! optional `--out`, `--threads` (or WAVECASCADE_THREADS), `--seed`.
//! Exit codes: 0 success, 1 configuration error, 2 numerical failure.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::compare::{run_comparison, run_dn_study, DnStudySpec};
use super::config::{load_config, ExperimentConfig, ExperimentKind};
use super::report::{write_meta, write_report_csv};
use super::runner::{run_simulate, run_sweep, run_taylor_check, write_sweep_csv};
use crate::error::{Error, Result};
use crate::params::in_regime_class;

#[derive(Parser, Debug)]
#[command(
    name = "wavecascade",
    version,
    about = "Pseudospectral water-waves solvers and asymptotic-model rate studies"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// experiment configuration file
    #[arg(long)]
    config: PathBuf,
    /// output directory (overrides [output] dir)
    #[arg(long)]
    out: Option<PathBuf>,
    /// worker pool size for sweeps (overrides WAVECASCADE_THREADS)
    #[arg(long)]
    threads: Option<usize>,
    /// RNG seed (overrides [experiment] seed)
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Integrate one model run and stream diagnostics
    Simulate(RunArgs),
    /// Model-vs-reference error sweep with a fitted rate
    Compare(RunArgs),
    /// Run the selected model across the regime sweep
    Sweep(RunArgs),
    /// Dirichlet-Neumann expansion remainder table
    DnStudy(RunArgs),
    /// Taylor-sign sufficient check on the configured data
    TaylorCheck(RunArgs),
}

impl Cmd {
    fn kind(&self) -> ExperimentKind {
        match self {
            Cmd::Simulate(_) => ExperimentKind::Simulate,
            Cmd::Compare(_) => ExperimentKind::Compare,
            Cmd::Sweep(_) => ExperimentKind::Sweep,
            Cmd::DnStudy(_) => ExperimentKind::DnStudy,
            Cmd::TaylorCheck(_) => ExperimentKind::TaylorCheck,
        }
    }

    fn args(&self) -> &RunArgs {
        match self {
            Cmd::Simulate(a) | Cmd::Compare(a) | Cmd::Sweep(a) | Cmd::DnStudy(a) | Cmd::TaylorCheck(a) => a,
        }
    }
}

fn threads_from_env() -> Option<usize> {
    std::env::var("WAVECASCADE_THREADS").ok()?.parse().ok()
}

fn apply_overrides(cfg: &mut ExperimentConfig, args: &RunArgs) {
    if let Some(out) = &args.out {
        cfg.out_dir = out.clone();
    }
    if let Some(seed) = args.seed {
        cfg.compare.seed = seed;
    }
    cfg.compare.threads = args.threads.or_else(threads_from_env).unwrap_or(1);
}

fn warn_regime_class(cfg: &ExperimentConfig) {
    for &v in &cfg.compare.values {
        if let Ok(p) = cfg.compare.preset.generate(v) {
            if !in_regime_class(&p, cfg.m_bound) {
                eprintln!(
                    "warning: regime point (ε={}, μ={}, γ={}, β={}) leaves the class with M = {}",
                    p.epsilon, p.mu, p.gamma, p.beta, cfg.m_bound
                );
            }
        }
    }
}

fn dispatch(cfg: &ExperimentConfig) -> Result<()> {
    std::fs::create_dir_all(&cfg.out_dir)?;
    warn_regime_class(cfg);
    match cfg.kind {
        ExperimentKind::Compare => {
            let report = run_comparison(&cfg.compare)?;
            write_report_csv(&cfg.out_dir.join("report.csv"), &report)?;
            write_meta(&cfg.out_dir.join("report.meta"), &report.meta)?;
            if let Some(fit) = &report.fit {
                println!("slope={:.4} residual={:.3e}", fit.slope, fit.residual);
            }
            for p in &report.points {
                if let Some(f) = &p.failure {
                    eprintln!("point {} failed: {f}", p.param);
                }
            }
            Ok(())
        }
        ExperimentKind::DnStudy => {
            let spec = DnStudySpec {
                preset: cfg.compare.preset,
                values: cfg.compare.values.clone(),
                target: cfg.dn_target.clone(),
                grid: cfg.compare.grid,
                data: cfg.compare.data.clone(),
                h0: cfg.compare.h0,
                nz_ref: cfg.compare.nz_ref,
                cg_tol: cfg.compare.cg_tol,
                cg_maxiter: cfg.compare.cg_maxiter,
                error_s: cfg.compare.error_s,
                seed: cfg.compare.seed,
                threads: cfg.compare.threads,
            };
            let (rows, meta) = run_dn_study(&spec)?;
            let mut w = std::io::BufWriter::new(std::fs::File::create(cfg.out_dir.join("report.csv"))?);
            for (k, v) in &meta {
                writeln!(w, "# {k}={v}")?;
            }
            writeln!(w, "param,error_hs,slope_running")?;
            for r in &rows {
                writeln!(
                    w,
                    "{:.16e},{:.16e},{}",
                    r.param,
                    r.error_hs,
                    r.slope_running.map(|s| format!("{s:.16e}")).unwrap_or_default()
                )?;
            }
            drop(w);
            write_meta(&cfg.out_dir.join("report.meta"), &meta)?;
            Ok(())
        }
        ExperimentKind::Simulate => {
            let value = cfg
                .compare
                .values
                .first()
                .ok_or_else(|| Error::Config("simulate needs one regime value".into()))?;
            let p = cfg.compare.preset.generate(*value)?;
            let nu = cfg.nu.resolve(&p);
            let summary = run_simulate(
                &cfg.compare,
                &cfg.out_dir,
                nu,
                cfg.snapshot_stride,
                cfg.write_snapshots,
            )?;
            let mut meta = std::collections::BTreeMap::new();
            meta.insert("kind".to_string(), "simulate".to_string());
            meta.insert("model".to_string(), cfg.compare.model.name().to_string());
            meta.insert("param".to_string(), format!("{}", summary.param));
            meta.insert("steps".to_string(), summary.steps.to_string());
            meta.insert("t_final".to_string(), format!("{}", summary.t_final));
            meta.insert("mass_drift".to_string(), format!("{:.3e}", summary.mass_drift));
            meta.insert("energy_drift".to_string(), format!("{:.3e}", summary.energy_drift));
            write_meta(&cfg.out_dir.join("report.meta"), &meta)?;
            println!(
                "t_final={} linf_zeta={:.6e} mass_drift={:.3e}",
                summary.t_final, summary.linf_zeta, summary.mass_drift
            );
            Ok(())
        }
        ExperimentKind::Sweep => {
            let rows = run_sweep(&cfg.compare, &cfg.out_dir)?;
            write_sweep_csv(&cfg.out_dir.join("report.csv"), &rows)?;
            let mut meta = std::collections::BTreeMap::new();
            meta.insert("kind".to_string(), "sweep".to_string());
            meta.insert("model".to_string(), cfg.compare.model.name().to_string());
            meta.insert(
                "values".to_string(),
                super::compare::join_floats(&cfg.compare.values),
            );
            write_meta(&cfg.out_dir.join("report.meta"), &meta)?;
            Ok(())
        }
        ExperimentKind::TaylorCheck => {
            let report = run_taylor_check(&cfg.compare, &cfg.out_dir)?;
            println!(
                "hessian_margin={:?} passes={}",
                report.hessian_margin, report.passes
            );
            println!("depth_margin={:?}", report.depth_margin);
            Ok(())
        }
    }
}

/// Entry point used by the binary and by tests; returns the process exit code.
pub fn cli_main(argv: &[String]) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let args = cli.cmd.args();
    let mut cfg = match load_config(&args.config, Some(cli.cmd.kind())) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    apply_overrides(&mut cfg, args);
    match dispatch(&cfg) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    }
}
