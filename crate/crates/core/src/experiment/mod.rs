//! Scenario configuration, execution and CSV output behind the `sqfock` CLI.

pub mod config;
pub mod scenarios;
pub mod sweep;
pub mod table;

pub use config::{ScenarioConfig, SCENARIOS};
pub use scenarios::{run, Check, ScenarioOutput};
pub use sweep::{worker_count, WORKERS_ENV};
pub use table::{FieldFile, ResultTable};
