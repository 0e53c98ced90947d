//! JSON run configuration.
//!
//! All quantities are SI. Field names follow the model symbols (`T_C`, `L_H`,
//! `A`, `R`, `K`, ...). Unknown fields are rejected.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::controller::{ControllerConfig, PlantModel, PlantState};
use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::optimizer::{CurrentBounds, EnvParameter, Optimizer, DEFAULT_TOLERANCE};
use crate::steady_state::Environment;
use crate::te_module::{bundled_calibration, lump_from_materials, CalibrationFile, LegMaterial, ModuleGeometry, ModuleParams, Ratings};

/// Module described by leg materials and geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialsSpec {
    pub p: LegMaterial,
    pub n: LegMaterial,
    pub geometry: ModuleGeometry,
    pub ratings: Ratings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptimizerConfig {
    pub method: String,
    pub tol: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            method: "golden".into(),
            tol: DEFAULT_TOLERANCE,
        }
    }
}

impl OptimizerConfig {
    pub fn build(&self) -> Result<Optimizer> {
        Optimizer::by_name(&self.method, self.tol)
    }
}

/// Either a current grid (`"start:stop:step"`) or a list of values for one
/// environment parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameter: Option<EnvParameter>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

/// Resolved form of [`SweepConfig`].
#[derive(Debug, Clone, PartialEq)]
pub enum SweepPlan {
    Current(Vec<f64>),
    Environment { parameter: EnvParameter, values: Vec<f64> },
}

impl SweepConfig {
    pub fn plan(&self) -> Result<SweepPlan> {
        match (&self.grid, self.parameter, &self.values) {
            (Some(grid), None, None) => Ok(SweepPlan::Current(parse_grid(grid)?)),
            (None, Some(parameter), Some(values)) => {
                if let Some(v) = values.iter().find(|v| !v.is_finite()) {
                    return Err(Error::validation("sweep.values", format!("non-finite value {v}")));
                }
                Ok(SweepPlan::Environment {
                    parameter,
                    values: values.clone(),
                })
            }
            _ => Err(Error::validation(
                "sweep",
                "expected either \"grid\" or both \"parameter\" and \"values\"",
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub plant: PlantModel,
    #[serde(default)]
    pub controller: ControllerConfig,
    /// Defaults to both spaces at ambient, `t = 0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<PlantState>,
    pub duration: f64,
    pub dt: f64,
}

impl SimulationConfig {
    pub fn initial_state(&self) -> PlantState {
        self.initial.unwrap_or(PlantState {
            t: 0.0,
            t_cold: self.plant.t_ambient,
            t_hot: self.plant.t_ambient,
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.plant.validate()?;
        self.controller.validate()?;
        self.initial_state().validate()?;
        require_non_negative("simulation.duration", self.duration)?;
        require_positive("simulation.dt", self.dt)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Lumped parameters given inline.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub materials: Option<MaterialsSpec>,
    /// Path to a calibration file, relative to the config file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module_file: Option<PathBuf>,
    /// Name of a bundled calibration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibration: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub environment: Option<Environment>,
    /// Defaults to `[0, I_max]` of the module.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<CurrentBounds>,
    #[serde(default)]
    pub optimizer: OptimizerConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationConfig>,
    #[serde(skip)]
    base_dir: Option<PathBuf>,
}

pub const BUNDLED_CALIBRATIONS: &[&str] = &["tec1-12704"];

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::validation("config", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads and validates a config file. Relative `module_file` paths are
    /// resolved against the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mut cfg = RunConfig::from_json(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Checks everything that does not need the filesystem.
    pub fn validate(&self) -> Result<()> {
        let sources = [
            self.module.is_some(),
            self.materials.is_some(),
            self.module_file.is_some(),
            self.calibration.is_some(),
        ];
        let count = sources.iter().filter(|&&s| s).count();
        if count != 1 {
            return Err(Error::validation(
                "module",
                format!("expected exactly one of module, materials, module_file, calibration; got {count}"),
            ));
        }
        if let Some(m) = &self.module {
            m.validate()?;
        }
        if let Some(name) = &self.calibration {
            if !BUNDLED_CALIBRATIONS.contains(&name.as_str()) {
                return Err(Error::validation(
                    "calibration",
                    format!("unknown calibration {name:?}, expected one of {BUNDLED_CALIBRATIONS:?}"),
                ));
            }
        }
        if let Some(env) = &self.environment {
            env.validate()?;
        }
        if let Some(b) = &self.bounds {
            b.validate()?;
        }
        self.optimizer.build()?;
        if let Some(s) = &self.sweep {
            s.plan()?;
        }
        if let Some(sim) = &self.simulation {
            sim.validate()?;
        }
        Ok(())
    }

    pub fn module_params(&self) -> Result<ModuleParams> {
        if let Some(m) = self.module {
            return Ok(m);
        }
        if let Some(spec) = &self.materials {
            return lump_from_materials(&spec.p, &spec.n, &spec.geometry, spec.ratings);
        }
        if let Some(file) = &self.module_file {
            let path = match &self.base_dir {
                Some(dir) if file.is_relative() => dir.join(file),
                _ => file.clone(),
            };
            let text = fs::read_to_string(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            let calibration: CalibrationFile = serde_json::from_str(&text)
                .map_err(|e| Error::validation("module_file", format!("{}: {e}", path.display())))?;
            calibration.module.validate()?;
            return Ok(calibration.module);
        }
        if self.calibration.is_some() {
            return Ok(bundled_calibration().module);
        }
        Err(Error::validation("module", "no module source"))
    }

    pub fn environment(&self) -> Result<Environment> {
        self.environment
            .ok_or_else(|| Error::validation("environment", "section is required for this command"))
    }

    pub fn bounds_for(&self, m: &ModuleParams) -> CurrentBounds {
        self.bounds.unwrap_or_else(|| CurrentBounds::for_module(m))
    }

    pub fn simulation(&self) -> Result<&SimulationConfig> {
        self.simulation
            .as_ref()
            .ok_or_else(|| Error::validation("simulation", "section is required for this command"))
    }

    pub fn sweep_plan(&self) -> Result<SweepPlan> {
        self.sweep
            .as_ref()
            .ok_or_else(|| Error::validation("sweep", "section is required for this command"))?
            .plan()
    }
}

/// Parses `"start:stop:step"` into `start, start + step, ...` up to `stop`
/// inclusive (within a relative slack of 1e-9 steps). `start > stop` gives
/// an empty grid.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        return Err(Error::validation("grid", format!("expected start:stop:step, got {text:?}")));
    };
    let parse = |name: &str, s: &str| -> Result<f64> {
        let v: f64 = s
            .trim()
            .parse()
            .map_err(|_| Error::validation("grid", format!("{name} {s:?} is not a number")))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::validation("grid", format!("{name} must be finite")))
        }
    };
    let (start, stop, step) = (parse("start", start)?, parse("stop", stop)?, parse("step", step)?);
    if step <= 0.0 {
        return Err(Error::validation("grid", "step must be > 0"));
    }
    if start > stop {
        return Ok(Vec::new());
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| start + step * k as f64).collect())
}
