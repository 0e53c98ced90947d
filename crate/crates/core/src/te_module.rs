//! Lumped thermoelectric module parameters.
//!
//! A module of `N` p–n couples is reduced to three constants: the Seebeck
//! coefficient `A`, the electrical resistance `R` and the thermal conductance
//! `K`. All three are temperature independent.

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};

/// Per-leg material properties. All values are magnitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LegMaterial {
    /// Electrical resistivity (Ω·m).
    pub rho: f64,
    /// Seebeck coefficient magnitude (V/K).
    pub alpha: f64,
    /// Thermal conductivity (W/(m·K)).
    pub kappa: f64,
}

impl LegMaterial {
    pub fn validate(&self, leg: &str) -> Result<()> {
        require_positive(&format!("{leg}.rho"), self.rho)?;
        require_positive(&format!("{leg}.alpha"), self.alpha)?;
        require_positive(&format!("{leg}.kappa"), self.kappa)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleGeometry {
    /// Effective leg length (m).
    pub l: f64,
    /// Leg cross-sectional area (m²).
    #[serde(rename = "S")]
    pub s: f64,
    /// Number of p–n couples.
    #[serde(rename = "N")]
    pub n: u32,
}

impl ModuleGeometry {
    pub fn validate(&self) -> Result<()> {
        require_positive("l", self.l)?;
        require_positive("S", self.s)?;
        if self.n == 0 {
            return Err(Error::validation("N", "must be >= 1"));
        }
        Ok(())
    }
}

/// Electrical ratings of a module, used as default optimizer bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ratings {
    #[serde(rename = "I_max")]
    pub i_max: f64,
    #[serde(rename = "V_max")]
    pub v_max: f64,
}

/// Lumped device constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleParams {
    /// Lumped Seebeck coefficient (V/K).
    #[serde(rename = "A")]
    pub seebeck: f64,
    /// Lumped electrical resistance (Ω).
    #[serde(rename = "R")]
    pub resistance: f64,
    /// Lumped thermal conductance (W/K).
    #[serde(rename = "K")]
    pub conductance: f64,
    /// Rated maximum current (A).
    #[serde(rename = "I_max")]
    pub i_max: f64,
    /// Rated maximum voltage (V).
    #[serde(rename = "V_max")]
    pub v_max: f64,
}

impl ModuleParams {
    pub fn new(seebeck: f64, resistance: f64, conductance: f64, ratings: Ratings) -> Result<Self> {
        let m = ModuleParams {
            seebeck,
            resistance,
            conductance,
            i_max: ratings.i_max,
            v_max: ratings.v_max,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("A", self.seebeck)?;
        require_positive("R", self.resistance)?;
        require_positive("K", self.conductance)?;
        require_positive("I_max", self.i_max)?;
        require_positive("V_max", self.v_max)
    }

    /// Z = A²/(K·R), in 1/K.
    pub fn z(&self) -> f64 {
        self.seebeck * self.seebeck / (self.conductance * self.resistance)
    }
}

/// Sums the p and n leg properties over `N` couples.
///
/// The resistance carries the `l/S` factor, mirroring the `S/l` factor of the
/// thermal conductance.
pub fn lump_from_materials(
    p: &LegMaterial,
    n: &LegMaterial,
    geometry: &ModuleGeometry,
    ratings: Ratings,
) -> Result<ModuleParams> {
    p.validate("p")?;
    n.validate("n")?;
    geometry.validate()?;
    let couples = f64::from(geometry.n);
    ModuleParams::new(
        (p.alpha + n.alpha) * couples,
        (p.rho + n.rho) * (geometry.l / geometry.s) * couples,
        (p.kappa + n.kappa) * (geometry.s / geometry.l) * couples,
        ratings,
    )
}

/// Dimensionless figure of merit `Z·T` at reference temperature `t`.
pub fn figure_of_merit(m: &ModuleParams, t: f64) -> Result<f64> {
    require_positive("T", t)?;
    Ok(m.z() * t)
}

/// Datasheet rating envelope of a commercial module.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatingEnvelope {
    /// Maximum junction temperature difference at zero load (K).
    #[serde(rename = "dT_max")]
    pub delta_t_max: f64,
    /// Current at which `dT_max` is reached (A).
    #[serde(rename = "I_max")]
    pub i_max: f64,
    /// Voltage at `I_max` and `dT_max` (V).
    #[serde(rename = "V_max")]
    pub v_max: f64,
    /// Hot-side temperature the ratings refer to (K).
    #[serde(rename = "T_hot")]
    pub t_hot: f64,
}

/// Inverts the standard maximum-performance relations of a single-stage
/// module with hot side at `T_h` and cold side at `T_c = T_h − ΔT_max`:
///
/// * `V_max = A·T_h`
/// * `I_max = A·T_c / R`
/// * `ΔT_max = ½·Z·T_c²`, so `K = A²·T_c² / (2·R·ΔT_max)`
pub fn calibrate_from_ratings(env: &RatingEnvelope) -> Result<ModuleParams> {
    require_positive("dT_max", env.delta_t_max)?;
    require_positive("I_max", env.i_max)?;
    require_positive("V_max", env.v_max)?;
    require_positive("T_hot", env.t_hot)?;
    let t_cold = env.t_hot - env.delta_t_max;
    if t_cold <= 0.0 {
        return Err(Error::validation("dT_max", "must be below T_hot"));
    }
    let seebeck = env.v_max / env.t_hot;
    let resistance = seebeck * t_cold / env.i_max;
    let conductance = seebeck * seebeck * t_cold * t_cold / (2.0 * resistance * env.delta_t_max);
    ModuleParams::new(
        seebeck,
        resistance,
        conductance,
        Ratings {
            i_max: env.i_max,
            v_max: env.v_max,
        },
    )
}

/// Contents of a module calibration file such as the bundled
/// `tec1-12704.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationFile {
    pub module: ModuleParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derived_from: Option<RatingEnvelope>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

const TEC1_12704_JSON: &str = include_str!("../data/tec1-12704.json");

/// The bundled TEC1-12704 parameter set.
pub fn tec1_12704() -> ModuleParams {
    bundled_calibration().module
}

pub fn bundled_calibration() -> CalibrationFile {
    serde_json::from_str(TEC1_12704_JSON).expect("bundled calibration file is valid JSON")
}
