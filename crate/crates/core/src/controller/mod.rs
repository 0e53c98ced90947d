//! Closed-loop simulation of a controller that re-optimizes the current in
//! real time, and replay of recorded environment traces.
//!
//! At every controller tick the current is set to the `gamma` minimizer for
//! the (optionally noisy) measured reservoir temperatures and held until the
//! next tick. The spaces evolve with [`step_plant`] in between.

mod plant;

pub use plant::{step_plant, PlantModel, PlantState};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::exergy::{gamma, ExergyReport};
use crate::optimizer::{CurrentBounds, Optimizer, DEFAULT_TOLERANCE};
use crate::steady_state::{operating_point, Environment, OperatingPoint};
use crate::te_module::ModuleParams;

/// Current applied when no feasible current exists.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HoldRepr", into = "HoldRepr")]
pub enum HoldPolicy {
    /// Keep the last feasible current (0 A before the first one).
    LastFeasible,
    /// Apply a fixed current.
    Fixed(f64),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum HoldRepr {
    Keyword(String),
    Current(f64),
}

impl TryFrom<HoldRepr> for HoldPolicy {
    type Error = String;

    fn try_from(repr: HoldRepr) -> std::result::Result<Self, String> {
        match repr {
            HoldRepr::Keyword(k) if k == "last" => Ok(HoldPolicy::LastFeasible),
            HoldRepr::Keyword(k) => Err(format!("hold_on_infeasible: expected \"last\" or a current, got {k:?}")),
            HoldRepr::Current(i) if i.is_finite() => Ok(HoldPolicy::Fixed(i)),
            HoldRepr::Current(i) => Err(format!("hold_on_infeasible: current must be finite, got {i}")),
        }
    }
}

impl From<HoldPolicy> for HoldRepr {
    fn from(p: HoldPolicy) -> Self {
        match p {
            HoldPolicy::LastFeasible => HoldRepr::Keyword("last".into()),
            HoldPolicy::Fixed(i) => HoldRepr::Current(i),
        }
    }
}

impl HoldPolicy {
    fn current(self, last_feasible: Option<f64>) -> f64 {
        match self {
            HoldPolicy::LastFeasible => last_feasible.unwrap_or(0.0),
            HoldPolicy::Fixed(i) => i,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ControllerConfig {
    /// Time between re-optimizations (s).
    pub update_period: f64,
    /// Defaults to the module rating.
    pub bounds: Option<CurrentBounds>,
    /// Current tolerance of the search (A).
    pub tol: f64,
    /// Minimizer name, see [`crate::optimizer::MinimizerRegistry`].
    pub method: String,
    /// Standard deviation of Gaussian noise on temperature readings (K).
    pub sensor_noise_std: f64,
    pub noise_seed: u64,
    pub hold_on_infeasible: HoldPolicy,
}

impl Default for ControllerConfig {
    fn default() -> Self {
        ControllerConfig {
            update_period: 1.0,
            bounds: None,
            tol: DEFAULT_TOLERANCE,
            method: "golden".into(),
            sensor_noise_std: 0.0,
            noise_seed: 0,
            hold_on_infeasible: HoldPolicy::LastFeasible,
        }
    }
}

impl ControllerConfig {
    pub fn validate(&self) -> Result<()> {
        require_positive("update_period", self.update_period)?;
        require_non_negative("sensor_noise_std", self.sensor_noise_std)?;
        if let Some(b) = &self.bounds {
            b.validate()?;
        }
        self.optimizer().map(|_| ())
    }

    pub fn optimizer(&self) -> Result<Optimizer> {
        Optimizer::by_name(&self.method, self.tol)
    }

    pub fn bounds_for(&self, m: &ModuleParams) -> CurrentBounds {
        self.bounds.unwrap_or_else(|| CurrentBounds::for_module(m))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimRecord {
    pub t: f64,
    /// Current applied from `t` until the next record.
    pub current: f64,
    /// The current was re-optimized at this record.
    pub controller_tick: bool,
    /// True reservoir temperatures and exchanger conductances.
    pub environment: Environment,
    pub point: OperatingPoint,
    /// `None` where `gamma` is undefined.
    pub exergy: Option<ExergyReport>,
}

impl SimRecord {
    pub fn state(&self) -> PlantState {
        PlantState {
            t: self.t,
            t_cold: self.environment.t_cold,
            t_hot: self.environment.t_hot,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SimTrace {
    pub records: Vec<SimRecord>,
}

impl SimTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> Option<&SimRecord> {
        self.records.last()
    }
}

/// One timestamped measurement of the environment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reading {
    pub t: f64,
    pub environment: Environment,
}

/// Picks the current for one controller decision.
struct Decision<'a> {
    m: &'a ModuleParams,
    optimizer: Optimizer,
    bounds: CurrentBounds,
    hold: HoldPolicy,
    last_feasible: Option<f64>,
}

impl Decision<'_> {
    fn decide(&mut self, measured: &Environment) -> Result<f64> {
        match self.optimizer.minimize(self.m, measured, &self.bounds) {
            Ok(r) => {
                self.last_feasible = Some(r.i_star);
                Ok(r.i_star)
            }
            Err(Error::InfeasibleProblem { .. }) => Ok(self.hold.current(self.last_feasible)),
            Err(e) => Err(e),
        }
    }
}

fn record(
    m: &ModuleParams,
    t: f64,
    current: f64,
    controller_tick: bool,
    environment: Environment,
) -> Result<SimRecord> {
    let point = operating_point(m, &environment, current)?;
    Ok(SimRecord {
        t,
        current,
        controller_tick,
        environment,
        exergy: gamma(&point).ok(),
        point,
    })
}

/// Runs the adaptive controller against `plant` for `duration` seconds.
///
/// The trace holds `floor(duration/dt) + 1` records spaced `dt` apart, the
/// first one at `initial.t`.
pub fn run_closed_loop(
    m: &ModuleParams,
    plant: &PlantModel,
    cfg: &ControllerConfig,
    initial: &PlantState,
    duration: f64,
    dt: f64,
) -> Result<SimTrace> {
    plant.validate()?;
    cfg.validate()?;
    initial.validate()?;
    require_non_negative("duration", duration)?;
    let limit = plant.max_stable_step();
    if !(dt > 0.0 && dt <= limit) {
        return Err(Error::UnstableStep { dt, limit });
    }
    if dt > cfg.update_period {
        return Err(Error::validation("dt", format!("must not exceed update_period {}", cfg.update_period)));
    }

    let steps = (duration / dt * (1.0 + 1e-12)).floor() as usize;
    let mut decision = Decision {
        m,
        optimizer: cfg.optimizer()?,
        bounds: cfg.bounds_for(m),
        hold: cfg.hold_on_infeasible,
        last_feasible: None,
    };
    let noise = Normal::new(0.0, cfg.sensor_noise_std)
        .map_err(|e| Error::validation("sensor_noise_std", e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.noise_seed);

    let mut state = *initial;
    let mut current = cfg.hold_on_infeasible.current(None);
    let mut ticks_done = 0usize;
    let mut records = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let elapsed = k as f64 * dt;
        let tick = elapsed >= ticks_done as f64 * cfg.update_period - 1e-9 * dt;
        let environment = plant.environment(&state);
        if tick {
            while ticks_done as f64 * cfg.update_period <= elapsed + 1e-9 * dt {
                ticks_done += 1;
            }
            let mut measured = environment;
            if cfg.sensor_noise_std > 0.0 {
                measured.t_cold += noise.sample(&mut rng);
                measured.t_hot += noise.sample(&mut rng);
            }
            current = decision.decide(&measured)?;
        }
        let rec = record(m, state.t, current, tick, environment)?;
        if k < steps {
            let mut next = step_plant(plant, &state, &rec.point, dt)?;
            next.t = initial.t + (k + 1) as f64 * dt;
            state = next;
        }
        records.push(rec);
    }
    Ok(SimTrace { records })
}

/// Evaluates what the controller would command for each recorded reading.
/// No plant integration takes place.
pub fn replay_environment(m: &ModuleParams, cfg: &ControllerConfig, readings: &[Reading]) -> Result<SimTrace> {
    cfg.validate()?;
    let mut decision = Decision {
        m,
        optimizer: cfg.optimizer()?,
        bounds: cfg.bounds_for(m),
        hold: cfg.hold_on_infeasible,
        last_feasible: None,
    };
    let mut records = Vec::with_capacity(readings.len());
    let mut previous_t = f64::NEG_INFINITY;
    for (row, reading) in readings.iter().enumerate() {
        let row = row + 1;
        if !(reading.t.is_finite() && reading.t > previous_t) {
            return Err(Error::MalformedInput {
                row,
                reason: format!("time {} is not strictly increasing", reading.t),
            });
        }
        previous_t = reading.t;
        reading
            .environment
            .validate()
            .map_err(|e| Error::MalformedInput { row, reason: e.to_string() })?;
        let current = decision.decide(&reading.environment)?;
        records.push(record(m, reading.t, current, true, reading.environment)?);
    }
    Ok(SimTrace { records })
}
