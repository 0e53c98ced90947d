//! Second-law accounting of an operating point.
//!
//! All quantities use the junction temperatures as the reservoir
//! temperatures of the equivalent reversible refrigerator.
//!
//! `eta_ii` follows the convention `COP_rev / COP` (always ≥ 1 for a real
//! cooler), which is the reciprocal of the usual second-law efficiency. With
//! this convention the loss ratio satisfies `gamma = eta_ii − 1`.

use serde::{Deserialize, Serialize};

use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::steady_state::OperatingPoint;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExergyReport {
    /// Entropy generation rate (W/K).
    pub s_gen: f64,
    /// Carnot COP between the junctions.
    pub cop_rev: f64,
    /// Reversible cooling for the same electrical power (W).
    pub q_cold_max: f64,
    /// Cooling capacity lost to irreversibility (W).
    pub q_cold_loss: f64,
    /// `COP_rev / COP`.
    pub eta_ii: f64,
    /// `Q_C,loss / Q_C`.
    pub gamma: f64,
}

/// `Q_H/T_Hj − Q_C/T_Cj`, the steady-state entropy production.
pub fn entropy_generation(op: &OperatingPoint) -> Result<f64> {
    require_positive("T_Cj", op.t_cold_junction)?;
    require_positive("T_Hj", op.t_hot_junction)?;
    Ok(op.q_hot / op.t_hot_junction - op.q_cold / op.t_cold_junction)
}

pub fn reversible_cop(t_cold_junction: f64, t_hot_junction: f64) -> Result<f64> {
    require_positive("T_Cj", t_cold_junction)?;
    require_positive("T_Hj", t_hot_junction)?;
    if !(t_hot_junction > t_cold_junction) {
        return Err(Error::DegenerateGradient {
            t_cold_junction,
            t_hot_junction,
        });
    }
    Ok(t_cold_junction / (t_hot_junction - t_cold_junction))
}

/// Largest cooling a reversible machine achieves with power `power`.
pub fn max_cooling(power: f64, t_cold_junction: f64, t_hot_junction: f64) -> Result<f64> {
    require_non_negative("W", power)?;
    Ok(power * reversible_cop(t_cold_junction, t_hot_junction)?)
}

pub fn cooling_loss(op: &OperatingPoint) -> Result<f64> {
    Ok(max_cooling(op.power, op.t_cold_junction, op.t_hot_junction)? - op.q_cold)
}

/// Full second-law report. Defined only with useful cooling and positive
/// drive.
pub fn gamma(op: &OperatingPoint) -> Result<ExergyReport> {
    if !(op.q_cold > 0.0) {
        return Err(Error::NoUsefulCooling { q_cold: op.q_cold });
    }
    if !(op.power > 0.0) {
        return Err(Error::NoDrive { power: op.power });
    }
    let cop_rev = reversible_cop(op.t_cold_junction, op.t_hot_junction)?;
    let q_cold_max = op.power * cop_rev;
    let q_cold_loss = q_cold_max - op.q_cold;
    let cop = op.q_cold / op.power;
    Ok(ExergyReport {
        s_gen: entropy_generation(op)?,
        cop_rev,
        q_cold_max,
        q_cold_loss,
        eta_ii: cop_rev / cop,
        gamma: q_cold_loss / op.q_cold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(q_cold: f64, q_hot: f64, tcj: f64, thj: f64) -> OperatingPoint {
        OperatingPoint {
            current: 1.0,
            q_cold,
            q_hot,
            t_cold_junction: tcj,
            t_hot_junction: thj,
            power: q_hot - q_cold,
            voltage: Some(q_hot - q_cold),
            cop: (q_hot > q_cold).then(|| q_cold / (q_hot - q_cold)),
        }
    }

    #[test]
    fn reversible_point_generates_no_entropy() {
        // Q_H/T_Hj = Q_C/T_Cj = 0.05 exactly.
        let op = point(14.5, 16.0, 290.0, 320.0);
        assert_eq!(entropy_generation(&op).unwrap(), 0.0);
        assert!(cooling_loss(&op).unwrap().abs() < 1e-12);
        assert!(gamma(&op).unwrap().gamma.abs() < 1e-12);
    }

    #[test]
    fn entropy_generation_by_substitution() {
        let op = point(8.0, 10.0, 290.0, 320.0);
        let s = entropy_generation(&op).unwrap();
        assert!((s - (10.0 / 320.0 - 8.0 / 290.0)).abs() < 1e-15);
        assert!((s - 0.003_664).abs() < 1e-6);
    }

    #[test]
    fn reversible_cop_cases() {
        assert!((reversible_cop(290.0, 320.0).unwrap() - 290.0 / 30.0).abs() < 1e-14);
        assert_eq!(reversible_cop(150.0, 300.0).unwrap(), 1.0);
        assert!(matches!(
            reversible_cop(300.0, 300.0),
            Err(Error::DegenerateGradient { .. })
        ));
    }

    #[test]
    fn max_cooling_cases() {
        assert_eq!(max_cooling(0.0, 290.0, 320.0).unwrap(), 0.0);
        assert!((max_cooling(3.0, 290.0, 320.0).unwrap() - 29.0).abs() < 1e-12);
        assert!(matches!(max_cooling(-1.0, 290.0, 320.0), Err(Error::Validation { .. })));
        assert!(matches!(
            max_cooling(3.0, 320.0, 290.0),
            Err(Error::DegenerateGradient { .. })
        ));
    }

    #[test]
    fn hand_example_report() {
        let op = point(8.0, 11.0, 290.0, 320.0);
        assert!((cooling_loss(&op).unwrap() - 21.0).abs() < 1e-12);
        let r = gamma(&op).unwrap();
        assert!((r.gamma - 2.625).abs() < 1e-12);
        assert!((r.eta_ii - 3.625).abs() < 1e-12);
        assert!((r.gamma - (r.eta_ii - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn gamma_domain_errors() {
        assert!(matches!(
            gamma(&point(-1.0, 2.0, 290.0, 320.0)),
            Err(Error::NoUsefulCooling { .. })
        ));
        assert!(matches!(gamma(&point(2.0, 1.0, 290.0, 320.0)), Err(Error::NoDrive { .. })));
        assert!(matches!(
            gamma(&point(2.0, 3.0, 300.0, 290.0)),
            Err(Error::DegenerateGradient { .. })
        ));
    }

    #[test]
    fn loss_equals_scaled_entropy_generation() {
        let op = point(8.0, 11.0, 290.0, 320.0);
        let r = gamma(&op).unwrap();
        let via_entropy = r.s_gen * 290.0 * 320.0 / 30.0;
        assert!((via_entropy - r.q_cold_loss).abs() <= 1e-9 * r.q_cold_loss);
    }
}
