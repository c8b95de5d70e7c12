//! Command-line harness: run configuration, artifact output, the standard
//! battery and the `gamma-lab` commands.

pub mod battery;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod pool;
pub mod random;
pub mod report;

pub use battery::{run_battery, run_criterion, BatteryOptions, BatteryProfile, CriterionOutcome};
pub use commands::{execute, run, Outcome, RunResult};
pub use config::{CommandKind, EngineSpec, RunConfig};
pub use error::{HarnessError, Result};
pub use output::{verify_manifest, ArtifactWriter, RunManifest, Table};
pub use report::Report;
