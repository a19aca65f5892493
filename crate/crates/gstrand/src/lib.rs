//! Simulation harness for G-strand systems.
//!
//! Loads JSON scenario files, integrates the selected model with the
//! `gstrand-core` numerics, evaluates diagnostics at a fixed step cadence and
//! writes per-field and per-diagnostic CSV files plus a `report.json`.

pub mod config;
pub mod convergence;
pub mod error;
pub mod report;
pub mod runner;
pub mod scenarios;

pub use config::ScenarioConfig;
pub use convergence::{convergence_study, ConvergenceTable};
pub use error::HarnessError;
pub use report::{RunReport, RunStatus};
pub use runner::run_scenario;
