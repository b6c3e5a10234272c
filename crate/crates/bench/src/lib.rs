//! Benchmark harness for `ncmusic-core`: Monte-Carlo RMSE sweeps with an
//! optional CRB overlay, the closed-form operation-count model, and the
//! configuration used by the `ncmusic` command-line tool.

pub mod cli;
pub mod config;
pub mod flops;
pub mod metrics;
pub mod sweep;

pub use config::{ScenarioConfig, SweepConfig};
pub use flops::{flop_model, FlopAlgorithm, GridPoints};
pub use metrics::RmseRecord;
pub use sweep::{run_sweep, write_report, SweepReport};
