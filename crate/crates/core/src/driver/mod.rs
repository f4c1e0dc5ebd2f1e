//! Config-driven runs, error norms and convergence studies.

pub mod config;
pub mod convergence;
pub mod run;
pub mod simulation;

pub use config::{parse_config, Problem, RunConfig};
pub use convergence::{convergence_study, ConvergenceReport, ConvergenceRow};
pub use run::{compute_error_norm, integrate, RunStats, StepRecord, TimeConfig, TimeMode};
pub use simulation::{check_mesh, run_simulation, RunSummary, Simulation};
