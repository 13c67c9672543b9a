//! Scenario runner for the two-photon interferometry simulator: TOML
//! scenarios in, CSV/SVG/JSON out.

pub mod config;
pub mod error;
pub mod output;
pub mod run;
pub mod svg;

pub use config::ScenarioConfig;
pub use error::{CliError, Result};
pub use run::{analyze, run_scenario, AnalyzeOptions, FitReport, RunOutput};
