//! Batch runner for the `ainv-core` experiments.
//!
//! Each scenario configures one or more algebra models, measures residuals
//! along nets or over seeded cases, and reports one CSV row per measured
//! quantity. [`runner::run_all`] executes scenarios in parallel, writes one
//! CSV per scenario plus `summary.csv`, and the binary maps the outcome to
//! its exit status (0 pass, 1 property failure, 2 configuration error).

pub mod config;
pub mod report;
pub mod runner;
pub mod scenarios;

pub use config::{ConfigError, ConfigFile, FlagOverrides, Params, ScenarioConfig};
pub use report::{ReportRow, ScenarioSummary};
pub use runner::{run_all, run_scenario, ScenarioOutcome};
pub use scenarios::Scenario;
