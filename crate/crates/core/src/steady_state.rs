//! Steady-state energy balances of a module between two heat exchangers.
//!
//! Sign convention: `Q_C > 0` removes heat from the cold space, `Q_H > 0`
//! rejects heat into the hot space. With no drive and `T_H > T_C` both flows
//! are negative (heat leaks back into the cold space).
//!
//! Junction balances, with `ΔT_j = T_Hj − T_Cj`:
//!
//! ```text
//! cold:  Q_C = A·I·T_Cj − ½·R·I² − K·ΔT_j
//! hot:   Q_H = A·I·T_Hj + ½·R·I² − K·ΔT_j
//! ```
//!
//! Substituting the exchanger relations `T_Cj = T_C − Q_C/L_C` and
//! `T_Hj = T_H + Q_H/L_H` gives a linear system in `(Q_C, Q_H)` at fixed `I`
//! which [`solve_heat_flows`] eliminates directly.

use serde::{Deserialize, Serialize};

use crate::error::{require_finite, require_positive, Error, Result};
use crate::te_module::ModuleParams;

/// Reservoir temperatures and heat-exchanger conductances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Environment {
    /// Cold-space temperature (K).
    #[serde(rename = "T_C")]
    pub t_cold: f64,
    /// Hot-space temperature (K).
    #[serde(rename = "T_H")]
    pub t_hot: f64,
    /// Cold-side exchanger conductance (W/K).
    #[serde(rename = "L_C")]
    pub l_cold: f64,
    /// Hot-side exchanger conductance (W/K).
    #[serde(rename = "L_H")]
    pub l_hot: f64,
}

impl Environment {
    pub fn new(t_cold: f64, t_hot: f64, l_cold: f64, l_hot: f64) -> Result<Self> {
        let env = Environment {
            t_cold,
            t_hot,
            l_cold,
            l_hot,
        };
        env.validate()?;
        Ok(env)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("T_C", self.t_cold)?;
        require_positive("T_H", self.t_hot)?;
        require_positive("L_C", self.l_cold)?;
        require_positive("L_H", self.l_hot)
    }
}

/// Full steady-state solution at one current.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    /// Electrical current (A).
    pub current: f64,
    /// Heat removed from the cold space (W).
    pub q_cold: f64,
    /// Heat rejected to the hot space (W).
    pub q_hot: f64,
    /// Cold-junction temperature (K).
    pub t_cold_junction: f64,
    /// Hot-junction temperature (K).
    pub t_hot_junction: f64,
    /// Electrical power `Q_H − Q_C` (W).
    pub power: f64,
    /// Terminal voltage `W/I`; `None` at zero current.
    pub voltage: Option<f64>,
    /// `Q_C/W`; `None` unless `W > 0`.
    pub cop: Option<f64>,
}

/// Heat flows `(Q_C, Q_H)` at current `current`.
///
/// Any sign of current is accepted.
pub fn solve_heat_flows(m: &ModuleParams, env: &Environment, current: f64) -> Result<(f64, f64)> {
    env.validate()?;
    require_finite("I", current)?;
    let a_i = m.seebeck * current;
    let k = m.conductance;
    let joule = 0.5 * m.resistance * current * current;
    let conduction = k * (env.t_hot - env.t_cold);

    // Rows are the cold and hot balances with the exchanger relations
    // substituted and the constant terms moved to the right.
    let a11 = -(a_i + k) / env.l_cold - 1.0;
    let a12 = -k / env.l_hot;
    let a21 = -k / env.l_cold;
    let a22 = (a_i - k) / env.l_hot - 1.0;
    let b1 = -a_i * env.t_cold + joule + conduction;
    let b2 = -a_i * env.t_hot - joule + conduction;

    // a11·a22 − a12·a21 expanded so the K² terms cancel symbolically.
    let det = 1.0 + (a_i + k) / env.l_cold + (k - a_i) / env.l_hot
        - a_i * a_i / (env.l_cold * env.l_hot);
    let scale = 1.0
        + (a_i + k).abs() / env.l_cold
        + (k - a_i).abs() / env.l_hot
        + a_i * a_i / (env.l_cold * env.l_hot);
    if !(det.abs() > 1e-12 * scale) {
        return Err(Error::SingularSystem {
            determinant: det,
            scale,
        });
    }

    if current == 0.0 {
        // Pure series conduction; both rows share the right-hand side and
        // the two flows are equal exactly.
        let q = -conduction / det;
        return Ok((q, q));
    }

    let q_cold = (b1 * a22 - a12 * b2) / det;
    let q_hot = (a11 * b2 - a21 * b1) / det;
    Ok((q_cold, q_hot))
}

/// Junction temperatures implied by the exchanger heat flows.
pub fn junction_temperatures(env: &Environment, q_cold: f64, q_hot: f64) -> Result<(f64, f64)> {
    env.validate()?;
    let t_cold_junction = env.t_cold - q_cold / env.l_cold;
    let t_hot_junction = env.t_hot + q_hot / env.l_hot;
    if !(t_cold_junction > 0.0 && t_hot_junction > 0.0) {
        return Err(Error::NonPhysicalTemperature {
            t_cold_junction,
            t_hot_junction,
        });
    }
    Ok((t_cold_junction, t_hot_junction))
}

pub fn operating_point(m: &ModuleParams, env: &Environment, current: f64) -> Result<OperatingPoint> {
    let (q_cold, q_hot) = solve_heat_flows(m, env, current)?;
    let (t_cold_junction, t_hot_junction) = junction_temperatures(env, q_cold, q_hot)?;
    let power = q_hot - q_cold;
    Ok(OperatingPoint {
        current,
        q_cold,
        q_hot,
        t_cold_junction,
        t_hot_junction,
        power,
        voltage: (current != 0.0).then(|| power / current),
        cop: (power > 0.0).then(|| q_cold / power),
    })
}
