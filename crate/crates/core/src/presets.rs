//! Named, self-contained experiments that regenerate the standard figure
//! datasets as CSV.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use crate::controller::{run_closed_loop, ControllerConfig, PlantModel, PlantState, SimTrace};
use crate::error::{Error, Result};
use crate::io::config::SimulationConfig;
use crate::io::csv::{format_value, write_curve_family, write_operating_points, write_trace, CurveFamily, Table};
use crate::optimizer::{sweep_current, sweep_environment, CurrentBounds, EnvParameter, Optimizer};
use crate::steady_state::Environment;
use crate::te_module::ModuleParams;

/// Reference operating environment of the single-curve figures.
pub const REFERENCE_ENVIRONMENT: Environment = Environment {
    t_cold: 300.0,
    t_hot: 305.0,
    l_cold: 1.0,
    l_hot: 2.0,
};

/// Environment behind the exchanger-conductance sweeps.
pub const CONDUCTANCE_SWEEP_ENVIRONMENT: Environment = Environment {
    t_cold: 300.0,
    t_hot: 330.0,
    l_cold: 1.0,
    l_hot: 2.0,
};

pub const HOT_TEMPERATURES: [f64; 4] = [310.0, 315.0, 320.0, 325.0];
pub const COLD_TEMPERATURES: [f64; 4] = [285.0, 290.0, 295.0, 300.0];
pub const CONDUCTANCES: [f64; 5] = [0.85, 1.5, 2.5, 3.5, 4.75];

/// Everything a preset may need from the caller.
#[derive(Debug)]
pub struct PresetContext {
    pub module: ModuleParams,
    pub optimizer: Optimizer,
    /// Current grid for curve presets.
    pub grid: Vec<f64>,
}

impl PresetContext {
    /// Grid `0, 0.01, ..., I_max`.
    pub fn default_grid(m: &ModuleParams) -> Vec<f64> {
        let n = (m.i_max / 0.01).round() as usize;
        (0..=n).map(|k| (k as f64 * 0.01).min(m.i_max)).collect()
    }
}

pub trait Preset: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn run(&self, ctx: &PresetContext, sink: &mut dyn Write) -> Result<()>;
}

/// Current sweep on one environment.
#[derive(Debug)]
struct CurrentCurve {
    name: &'static str,
    description: &'static str,
}

impl Preset for CurrentCurve {
    fn name(&self) -> &'static str {
        self.name
    }

    fn description(&self) -> &'static str {
        self.description
    }

    fn run(&self, ctx: &PresetContext, sink: &mut dyn Write) -> Result<()> {
        write_operating_points(sink, &sweep_current(&ctx.module, &REFERENCE_ENVIRONMENT, &ctx.grid))
    }
}

/// One current sweep per value of an environment parameter.
#[derive(Debug)]
struct Family {
    name: &'static str,
    description: &'static str,
    base: Environment,
    parameter: EnvParameter,
    values: &'static [f64],
}

impl Family {
    fn build(&self, ctx: &PresetContext) -> CurveFamily {
        let optima = sweep_environment(
            &ctx.module,
            &self.base,
            self.parameter,
            self.values,
            &CurrentBounds::for_module(&ctx.module),
            &ctx.optimizer,
        );
        CurveFamily {
            parameter: self.parameter,
            curves: optima
                .into_iter()
                .map(|o| {
                    let rows = sweep_current(&ctx.module, &o.environment, &ctx.grid);
                    (o, rows)
                })
                .collect(),
        }
    }
}

impl Preset for Family {
    fn name(&self) -> &'static str {
        self.name
    }

    fn description(&self) -> &'static str {
        self.description
    }

    fn run(&self, ctx: &PresetContext, sink: &mut dyn Write) -> Result<()> {
        write_curve_family(sink, &self.build(ctx))
    }
}

/// Plant whose cold space settles about 8 K below a 303 K ambient under the
/// loss-ratio controller, starting from ambient.
///
/// The hot-side exhaust has to be strong: the optimal current grows with the
/// junction gradient, so a weakly cooled hot space heats up, raises the
/// current further and runs away until cooling is lost.
pub fn converging_scenario() -> SimulationConfig {
    let plant = PlantModel {
        c_cold: 60.0,
        c_hot: 60.0,
        u_cold_ambient: 0.5,
        u_hot_ambient: 2.0,
        q_internal: 0.0,
        t_ambient: 303.0,
        l_cold: 1.0,
        l_hot: 2.0,
    };
    SimulationConfig {
        plant,
        controller: ControllerConfig {
            tol: 1e-9,
            ..ControllerConfig::default()
        },
        initial: Some(PlantState {
            t: 0.0,
            t_cold: plant.t_ambient,
            t_hot: plant.t_ambient,
        }),
        duration: 8000.0,
        dt: 1.0,
    }
}

pub fn run_scenario(m: &ModuleParams, sim: &SimulationConfig) -> Result<SimTrace> {
    run_closed_loop(m, &sim.plant, &sim.controller, &sim.initial_state(), sim.duration, sim.dt)
}

/// Full closed-loop trace of the converging scenario.
#[derive(Debug)]
struct Transient;

impl Preset for Transient {
    fn name(&self) -> &'static str {
        "fig6"
    }

    fn description(&self) -> &'static str {
        "closed-loop transient from ambient: temperatures, flows, COP, COP_rev, gamma"
    }

    fn run(&self, ctx: &PresetContext, sink: &mut dyn Write) -> Result<()> {
        write_trace(sink, &run_scenario(&ctx.module, &converging_scenario())?)
    }
}

/// Captured versus lost cooling over the converging scenario.
#[derive(Debug)]
struct LossHistory;

impl Preset for LossHistory {
    fn name(&self) -> &'static str {
        "fig7"
    }

    fn description(&self) -> &'static str {
        "captured and lost cooling capacity over the closed-loop transient"
    }

    fn run(&self, ctx: &PresetContext, sink: &mut dyn Write) -> Result<()> {
        let trace = run_scenario(&ctx.module, &converging_scenario())?;
        let mut table = Table::new(sink, &["t", "I", "Q_C", "Q_C_max", "Q_C_loss", "gamma"])?;
        for r in &trace.records {
            let e = r.exergy.as_ref();
            table.row([
                format_value(Some(r.t)),
                format_value(Some(r.current)),
                format_value(Some(r.point.q_cold)),
                format_value(e.map(|e| e.q_cold_max)),
                format_value(e.map(|e| e.q_cold_loss)),
                format_value(e.map(|e| e.gamma)),
            ])?;
        }
        table.finish()
    }
}

type Constructor = fn() -> Box<dyn Preset>;

/// Name → constructor table of the figure presets.
#[derive(Clone)]
pub struct PresetRegistry {
    entries: BTreeMap<&'static str, Constructor>,
}

impl fmt::Debug for PresetRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.keys()).finish()
    }
}

impl Default for PresetRegistry {
    fn default() -> Self {
        let mut r = PresetRegistry {
            entries: BTreeMap::new(),
        };
        r.register("fig2", || {
            Box::new(CurrentCurve {
                name: "fig2",
                description: "Q_C, Q_H, W and COP against current at T_C = 300 K, T_H = 305 K",
            })
        });
        r.register("fig3", || {
            Box::new(CurrentCurve {
                name: "fig3",
                description: "gamma, eta_II and COP_rev against current at T_C = 300 K, T_H = 305 K",
            })
        });
        r.register("fig4a", || {
            Box::new(Family {
                name: "fig4a",
                description: "gamma(I) for T_H in 310..325 K",
                base: REFERENCE_ENVIRONMENT,
                parameter: EnvParameter::HotTemperature,
                values: &HOT_TEMPERATURES,
            })
        });
        r.register("fig4b", || {
            Box::new(Family {
                name: "fig4b",
                description: "gamma(I) for T_C in 285..300 K",
                base: REFERENCE_ENVIRONMENT,
                parameter: EnvParameter::ColdTemperature,
                values: &COLD_TEMPERATURES,
            })
        });
        r.register("fig4c", || {
            Box::new(Family {
                name: "fig4c",
                description: "gamma(I) for L_H in 0.85..4.75 W/K",
                base: CONDUCTANCE_SWEEP_ENVIRONMENT,
                parameter: EnvParameter::HotConductance,
                values: &CONDUCTANCES,
            })
        });
        r.register("fig4d", || {
            Box::new(Family {
                name: "fig4d",
                description: "gamma(I) for L_C in 0.85..4.75 W/K",
                base: CONDUCTANCE_SWEEP_ENVIRONMENT,
                parameter: EnvParameter::ColdConductance,
                values: &CONDUCTANCES,
            })
        });
        r.register("fig6", || Box::new(Transient));
        r.register("fig7", || Box::new(LossHistory));
        r
    }
}

impl PresetRegistry {
    pub fn register(&mut self, name: &'static str, constructor: Constructor) {
        self.entries.insert(name, constructor);
    }

    pub fn create(&self, name: &str) -> Result<Box<dyn Preset>> {
        self.entries.get(name).map(|c| c()).ok_or_else(|| {
            let known: Vec<_> = self.entries.keys().copied().collect();
            Error::validation("preset", format!("unknown preset {name:?}, expected one of {known:?}"))
        })
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }
}
