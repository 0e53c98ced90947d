//! Parameter sweeps over current and environment.
//!
//! Rows are independent and evaluated in parallel; output order always
//! matches input order.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{evaluate, CurrentBounds, OptimizationResult, Optimizer};
use crate::error::{Error, Result};
use crate::exergy::ExergyReport;
use crate::steady_state::{operating_point, Environment, OperatingPoint};
use crate::te_module::ModuleParams;

#[derive(Debug, Clone, PartialEq)]
pub struct CurrentSweepRow {
    pub current: f64,
    /// `None` where the steady state could not be solved.
    pub point: Option<OperatingPoint>,
    /// `None` where `gamma` is undefined.
    pub exergy: Option<ExergyReport>,
}

/// Steady state and exergy report at every current of `grid`.
pub fn sweep_current(m: &ModuleParams, env: &Environment, grid: &[f64]) -> Vec<CurrentSweepRow> {
    grid.par_iter()
        .map(|&current| match evaluate(m, env, current) {
            Some((op, report)) => CurrentSweepRow {
                current,
                point: Some(op),
                exergy: Some(report),
            },
            None => CurrentSweepRow {
                current,
                point: operating_point(m, env, current).ok(),
                exergy: None,
            },
        })
        .collect()
}

/// Environment field varied by [`sweep_environment`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnvParameter {
    #[serde(rename = "T_H")]
    HotTemperature,
    #[serde(rename = "T_C")]
    ColdTemperature,
    #[serde(rename = "L_H")]
    HotConductance,
    #[serde(rename = "L_C")]
    ColdConductance,
}

impl EnvParameter {
    pub fn symbol(self) -> &'static str {
        match self {
            EnvParameter::HotTemperature => "T_H",
            EnvParameter::ColdTemperature => "T_C",
            EnvParameter::HotConductance => "L_H",
            EnvParameter::ColdConductance => "L_C",
        }
    }

    pub fn apply(self, base: &Environment, value: f64) -> Environment {
        let mut env = *base;
        match self {
            EnvParameter::HotTemperature => env.t_hot = value,
            EnvParameter::ColdTemperature => env.t_cold = value,
            EnvParameter::HotConductance => env.l_hot = value,
            EnvParameter::ColdConductance => env.l_cold = value,
        }
        env
    }
}

impl fmt::Display for EnvParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for EnvParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T_H" => Ok(EnvParameter::HotTemperature),
            "T_C" => Ok(EnvParameter::ColdTemperature),
            "L_H" => Ok(EnvParameter::HotConductance),
            "L_C" => Ok(EnvParameter::ColdConductance),
            other => Err(Error::validation(
                "sweep.parameter",
                format!("expected one of T_H, T_C, L_H, L_C, got {other:?}"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvironmentSweepRow {
    pub value: f64,
    pub environment: Environment,
    /// Per-row failures (typically infeasibility) do not stop the sweep.
    pub result: Result<OptimizationResult>,
}

pub fn sweep_environment(
    m: &ModuleParams,
    base: &Environment,
    parameter: EnvParameter,
    values: &[f64],
    bounds: &CurrentBounds,
    optimizer: &Optimizer,
) -> Vec<EnvironmentSweepRow> {
    values
        .par_iter()
        .map(|&value| {
            let environment = parameter.apply(base, value);
            EnvironmentSweepRow {
                value,
                environment,
                result: optimizer.minimize(m, &environment, bounds),
            }
        })
        .collect()
}
