//! Experiment orchestration for the `cascade` CLI: TOML configs, parameter
//! sweeps, Monte Carlo replication and CSV output.

pub mod config;
pub mod error;
pub mod format;
pub mod runners;
pub mod sim;

pub use config::ExperimentConfig;
pub use error::{HarnessError, Result};
pub use runners::{run_analyze, run_boundary, run_check_bound, run_kernel, run_simulate, run_sweep};
pub use sim::{empirical_threshold, SweepRow};
