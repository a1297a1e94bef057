//! Experiment orchestration: configuration, initial data, regime sweeps,
//! reference-vs-model error measurement, log-log rate fitting, persistence,
//! and the command-line interface.

mod cli;
mod compare;
mod config;
mod initial;
mod report;
mod runner;

pub use cli::cli_main;
pub use compare::{
    dn_study_slope, model_auto_dt, run_comparison, run_dn_study, CompareSpec, DnStudyRow,
    DnStudySpec, GridSpec, Horizon, ModelKind, REFERENCE_DT_RATIO, REFERENCE_NZ,
};
pub use config::{load_config, parse_field_spec, ExperimentConfig, ExperimentKind, NuChoice};
pub use initial::{make_initial_data, Bump, FieldSpec, InitialDataSpec};
pub use report::{
    fit_rate, running_slopes, write_meta, write_report_csv, ConvergenceReport, PointResult,
    RateFit,
};
pub use runner::{run_simulate, run_sweep, run_taylor_check, write_sweep_csv, RunSummary};
