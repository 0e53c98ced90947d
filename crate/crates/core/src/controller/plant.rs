//! Two-node lumped-capacitance model of the cooled and heated spaces.

use serde::{Deserialize, Serialize};

use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::steady_state::{Environment, OperatingPoint};

/// Thermal masses and couplings of the spaces on either side of the module.
///
/// The exchanger conductances `L_C`, `L_H` belong to the rig and are handed
/// to the steady-state model together with the current node temperatures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlantModel {
    /// Cold-space heat capacity (J/K).
    #[serde(rename = "C_c")]
    pub c_cold: f64,
    /// Hot-space heat capacity (J/K).
    #[serde(rename = "C_h")]
    pub c_hot: f64,
    /// Cold-space leak to ambient (W/K).
    #[serde(rename = "U_c_amb")]
    pub u_cold_ambient: f64,
    /// Hot-space exhaust to ambient (W/K).
    #[serde(rename = "U_h_amb")]
    pub u_hot_ambient: f64,
    /// Internal heat load in the cold space (W).
    #[serde(rename = "Q_int", default)]
    pub q_internal: f64,
    /// Ambient temperature (K).
    #[serde(rename = "T_amb")]
    pub t_ambient: f64,
    /// Cold-side exchanger conductance (W/K).
    #[serde(rename = "L_C")]
    pub l_cold: f64,
    /// Hot-side exchanger conductance (W/K).
    #[serde(rename = "L_H")]
    pub l_hot: f64,
}

impl PlantModel {
    pub fn validate(&self) -> Result<()> {
        require_positive("C_c", self.c_cold)?;
        require_positive("C_h", self.c_hot)?;
        require_non_negative("U_c_amb", self.u_cold_ambient)?;
        require_non_negative("U_h_amb", self.u_hot_ambient)?;
        if !self.q_internal.is_finite() {
            return Err(Error::validation("Q_int", "must be finite"));
        }
        require_positive("T_amb", self.t_ambient)?;
        require_positive("L_C", self.l_cold)?;
        require_positive("L_H", self.l_hot)
    }

    /// Largest explicit-Euler step: half the smallest capacity over the
    /// largest conductance attached to a node (ambient plus exchanger).
    pub fn max_stable_step(&self) -> f64 {
        let conductance = (self.u_cold_ambient + self.l_cold).max(self.u_hot_ambient + self.l_hot);
        0.5 * self.c_cold.min(self.c_hot) / conductance
    }

    /// Environment seen by the module when the spaces are in `state`.
    pub fn environment(&self, state: &PlantState) -> Environment {
        Environment {
            t_cold: state.t_cold,
            t_hot: state.t_hot,
            l_cold: self.l_cold,
            l_hot: self.l_hot,
        }
    }

    /// Net heat into the cold node (W).
    pub fn cold_net_heat(&self, state: &PlantState, op: &OperatingPoint) -> f64 {
        self.u_cold_ambient * (self.t_ambient - state.t_cold) + self.q_internal - op.q_cold
    }

    /// Net heat into the hot node (W).
    pub fn hot_net_heat(&self, state: &PlantState, op: &OperatingPoint) -> f64 {
        op.q_hot - self.u_hot_ambient * (state.t_hot - self.t_ambient)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlantState {
    /// Time (s).
    pub t: f64,
    /// Cold-space temperature (K).
    #[serde(rename = "T_C")]
    pub t_cold: f64,
    /// Hot-space temperature (K).
    #[serde(rename = "T_H")]
    pub t_hot: f64,
}

impl PlantState {
    pub fn validate(&self) -> Result<()> {
        if !self.t.is_finite() {
            return Err(Error::validation("t", "must be finite"));
        }
        require_positive("T_C", self.t_cold)?;
        require_positive("T_H", self.t_hot)
    }
}

/// One explicit-Euler step with the module held at `op`.
pub fn step_plant(plant: &PlantModel, state: &PlantState, op: &OperatingPoint, dt: f64) -> Result<PlantState> {
    let limit = plant.max_stable_step();
    if !(dt > 0.0 && dt <= limit) {
        return Err(Error::UnstableStep { dt, limit });
    }
    let next = PlantState {
        t: state.t + dt,
        t_cold: state.t_cold + dt / plant.c_cold * plant.cold_net_heat(state, op),
        t_hot: state.t_hot + dt / plant.c_hot * plant.hot_net_heat(state, op),
    };
    if !(next.t_cold > 0.0 && next.t_hot > 0.0) {
        return Err(Error::NonPhysicalTemperature {
            t_cold_junction: next.t_cold,
            t_hot_junction: next.t_hot,
        });
    }
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plant() -> PlantModel {
        PlantModel {
            c_cold: 100.0,
            c_hot: 200.0,
            u_cold_ambient: 0.0,
            u_hot_ambient: 0.5,
            q_internal: 0.0,
            t_ambient: 303.0,
            l_cold: 1.0,
            l_hot: 2.0,
        }
    }

    fn idle(q_cold: f64, q_hot: f64) -> OperatingPoint {
        OperatingPoint {
            current: 0.0,
            q_cold,
            q_hot,
            t_cold_junction: 300.0,
            t_hot_junction: 300.0,
            power: q_hot - q_cold,
            voltage: None,
            cop: None,
        }
    }

    #[test]
    fn equilibrium_is_a_fixed_point() {
        let s = PlantState {
            t: 5.0,
            t_cold: 303.0,
            t_hot: 303.0,
        };
        let next = step_plant(&plant(), &s, &idle(0.0, 0.0), 1.0).unwrap();
        assert_eq!(next.t_cold, 303.0);
        assert_eq!(next.t_hot, 303.0);
        assert_eq!(next.t, 6.0);
    }

    #[test]
    fn cold_node_drop_by_substitution() {
        let s = PlantState {
            t: 0.0,
            t_cold: 303.0,
            t_hot: 303.0,
        };
        let next = step_plant(&plant(), &s, &idle(10.0, 10.0), 1.0).unwrap();
        assert!((303.0 - next.t_cold - 0.1).abs() < 1e-12);
    }

    #[test]
    fn unstable_step_is_rejected() {
        let s = PlantState {
            t: 0.0,
            t_cold: 303.0,
            t_hot: 303.0,
        };
        let p = plant();
        // 0.5 · 100 / 2.5 = 20 s
        assert_eq!(p.max_stable_step(), 20.0);
        assert!(matches!(
            step_plant(&p, &s, &idle(0.0, 0.0), 20.5),
            Err(Error::UnstableStep { .. })
        ));
        assert!(matches!(
            step_plant(&p, &s, &idle(0.0, 0.0), 0.0),
            Err(Error::UnstableStep { .. })
        ));
    }
}
