//! Current that minimizes the loss ratio `gamma`.
//!
//! `gamma(I)` is only defined where the module cools (`Q_C > 0`), draws power
//! (`W > 0`) and keeps the hot junction above the cold one. The search first
//! locates that feasible interval inside the current bounds and then hands
//! the objective to a [`Minimizer`] chosen by name.

mod minimizer;
mod sweep;

pub use minimizer::{DenseGrid, GuardedGoldenSection, Minimizer, MinimizerRegistry, Minimum};
pub use sweep::{sweep_current, sweep_environment, CurrentSweepRow, EnvParameter, EnvironmentSweepRow};

use serde::{Deserialize, Serialize};

use crate::error::{require_finite, Error, Result};
use crate::exergy::{gamma, ExergyReport};
use crate::steady_state::{operating_point, Environment, OperatingPoint};
use crate::te_module::ModuleParams;

/// Default abscissa tolerance of the current search (A).
pub const DEFAULT_TOLERANCE: f64 = 1e-4;

/// Edge tolerance of the feasible-interval bisection (A).
pub const FEASIBILITY_TOLERANCE: f64 = 1e-6;

const FEASIBILITY_SCAN_POINTS: usize = 257;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurrentBounds {
    #[serde(rename = "I_min")]
    pub min: f64,
    #[serde(rename = "I_max")]
    pub max: f64,
}

impl CurrentBounds {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        let b = CurrentBounds { min, max };
        b.validate()?;
        Ok(b)
    }

    /// `[0, I_max]` of the module rating.
    pub fn for_module(m: &ModuleParams) -> Self {
        CurrentBounds {
            min: 0.0,
            max: m.i_max,
        }
    }

    pub fn validate(&self) -> Result<()> {
        require_finite("I_min", self.min)?;
        require_finite("I_max", self.max)?;
        if self.min > self.max {
            return Err(Error::validation("bounds", format!("I_min {} exceeds I_max {}", self.min, self.max)));
        }
        Ok(())
    }
}

/// Closed current interval on which `gamma` is defined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub i_star: f64,
    pub gamma_star: f64,
    pub operating_point: OperatingPoint,
    pub exergy: ExergyReport,
    pub evaluations: usize,
    pub converged: bool,
    /// The pre-scan found several local minima and the dense-grid fallback ran.
    pub non_unimodal: bool,
    pub feasible_interval: Interval,
    pub method: &'static str,
}

/// Operating point and report where `gamma` is defined, `None` elsewhere.
pub fn evaluate(m: &ModuleParams, env: &Environment, current: f64) -> Option<(OperatingPoint, ExergyReport)> {
    let op = operating_point(m, env, current).ok()?;
    let report = gamma(&op).ok()?;
    Some((op, report))
}

fn is_feasible(m: &ModuleParams, env: &Environment, current: f64) -> bool {
    evaluate(m, env, current).is_some()
}

/// Bisects between a feasible and an infeasible current; returns the
/// feasible end once the gap is below [`FEASIBILITY_TOLERANCE`].
fn bisect_edge(m: &ModuleParams, env: &Environment, mut feasible: f64, mut infeasible: f64) -> f64 {
    while (feasible - infeasible).abs() > FEASIBILITY_TOLERANCE {
        let mid = 0.5 * (feasible + infeasible);
        if mid == feasible || mid == infeasible {
            break;
        }
        if is_feasible(m, env, mid) {
            feasible = mid;
        } else {
            infeasible = mid;
        }
    }
    feasible
}

/// Largest sub-interval of `bounds` on which `gamma` is defined, or `None`
/// when no sampled current is feasible.
///
/// A uniform scan finds the longest run of feasible samples; its edges are
/// then refined by bisection.
pub fn feasible_interval(m: &ModuleParams, env: &Environment, bounds: &CurrentBounds) -> Option<Interval> {
    if bounds.min == bounds.max {
        return is_feasible(m, env, bounds.min).then_some(Interval {
            lo: bounds.min,
            hi: bounds.max,
        });
    }
    let n = FEASIBILITY_SCAN_POINTS;
    let step = (bounds.max - bounds.min) / (n - 1) as f64;
    let xs: Vec<f64> = (0..n)
        .map(|k| if k + 1 == n { bounds.max } else { bounds.min + step * k as f64 })
        .collect();
    let flags: Vec<bool> = xs.iter().map(|&x| is_feasible(m, env, x)).collect();

    let mut best: Option<(usize, usize)> = None;
    let mut k = 0;
    while k < n {
        if flags[k] {
            let start = k;
            while k + 1 < n && flags[k + 1] {
                k += 1;
            }
            if best.is_none_or(|(s, e)| k - start > e - s) {
                best = Some((start, k));
            }
        }
        k += 1;
    }
    let (start, end) = best?;
    let lo = if start == 0 {
        xs[0]
    } else {
        bisect_edge(m, env, xs[start], xs[start - 1])
    };
    let hi = if end + 1 == n {
        xs[n - 1]
    } else {
        bisect_edge(m, env, xs[end], xs[end + 1])
    };
    Some(Interval { lo, hi })
}

/// Feasible-interval search plus a named minimizer.
#[derive(Debug)]
pub struct Optimizer {
    minimizer: Box<dyn Minimizer>,
    tolerance: f64,
}

impl Default for Optimizer {
    fn default() -> Self {
        Optimizer::new(Box::new(GuardedGoldenSection::default()), DEFAULT_TOLERANCE)
            .expect("default tolerance is positive")
    }
}

impl Optimizer {
    pub fn new(minimizer: Box<dyn Minimizer>, tolerance: f64) -> Result<Self> {
        if !(tolerance.is_finite() && tolerance > 0.0) {
            return Err(Error::validation("tol", format!("must be finite and > 0, got {tolerance}")));
        }
        Ok(Optimizer { minimizer, tolerance })
    }

    /// Looks `method` up in the default registry.
    pub fn by_name(method: &str, tolerance: f64) -> Result<Self> {
        Optimizer::new(MinimizerRegistry::default().create(method)?, tolerance)
    }

    pub fn method(&self) -> &'static str {
        self.minimizer.name()
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn minimize(&self, m: &ModuleParams, env: &Environment, bounds: &CurrentBounds) -> Result<OptimizationResult> {
        bounds.validate()?;
        env.validate()?;
        let interval = feasible_interval(m, env, bounds).ok_or(Error::InfeasibleProblem {
            i_min: bounds.min,
            i_max: bounds.max,
        })?;
        let mut objective = |i: f64| evaluate(m, env, i).map_or(f64::INFINITY, |(_, r)| r.gamma);
        let found = self
            .minimizer
            .minimize(&mut objective, interval.lo, interval.hi, self.tolerance);
        let i_star = found.x.clamp(interval.lo, interval.hi);
        let (operating_point, exergy) = evaluate(m, env, i_star).ok_or(Error::InfeasibleProblem {
            i_min: bounds.min,
            i_max: bounds.max,
        })?;
        Ok(OptimizationResult {
            i_star,
            gamma_star: exergy.gamma,
            operating_point,
            exergy,
            evaluations: found.evaluations,
            converged: found.converged,
            non_unimodal: found.non_unimodal,
            feasible_interval: interval,
            method: self.minimizer.name(),
        })
    }
}

/// Guarded golden-section minimization of `gamma` to tolerance `tol` (A).
pub fn minimize_gamma(
    m: &ModuleParams,
    env: &Environment,
    bounds: &CurrentBounds,
    tol: f64,
) -> Result<OptimizationResult> {
    Optimizer::new(Box::new(GuardedGoldenSection::default()), tol)?.minimize(m, env, bounds)
}
