//! Configuration files and CSV tables.

pub mod config;
pub mod csv;

pub use config::{parse_grid, OptimizerConfig, RunConfig, SimulationConfig, SweepConfig, SweepPlan};
