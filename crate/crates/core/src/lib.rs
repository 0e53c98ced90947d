//! Steady-state model, exergy analysis and loss-ratio optimization of
//! thermoelectric coolers with finite heat exchangers, plus a closed-loop
//! simulator of a controller that tracks the optimal current.

// NaN must fail every physical-range check, hence `!(a > b)`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod controller;
pub mod error;
pub mod exergy;
pub mod io;
pub mod optimizer;
pub mod presets;
pub mod steady_state;
pub mod te_module;

pub use error::{Error, ErrorClass, Result};
pub use exergy::{gamma, ExergyReport};
pub use optimizer::{minimize_gamma, CurrentBounds, OptimizationResult, Optimizer};
pub use steady_state::{operating_point, solve_heat_flows, Environment, OperatingPoint};
pub use te_module::{tec1_12704, ModuleParams};
