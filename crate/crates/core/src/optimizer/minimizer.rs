//! Derivative-free scalar minimizers, selectable by name.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Outcome of a bounded scalar minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
    /// The coarse pre-scan found more than one strict local minimum.
    pub non_unimodal: bool,
}

/// A strategy that minimizes `objective` over `[lo, hi]` to abscissa
/// tolerance `tol`.
///
/// Undefined objective values are reported as `f64::INFINITY`. The returned
/// abscissa always lies inside `[lo, hi]`.
pub trait Minimizer: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;

    fn minimize(&self, objective: &mut dyn FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Minimum;
}

/// Samples `n` equally spaced points over `[lo, hi]` (endpoints included).
fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = if n > 1 { (hi - lo) / (n - 1) as f64 } else { 0.0 };
    (0..n).map(move |k| if k + 1 == n { hi } else { lo + step * k as f64 })
}

fn argmin(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (k, &v)| if v < best.1 { (k, v) } else { best })
        .0
}

/// Number of strict local minima, endpoints included.
fn count_local_minima(values: &[f64]) -> usize {
    let n = values.len();
    if n < 2 {
        return n;
    }
    (0..n)
        .filter(|&k| {
            let v = values[k];
            v.is_finite()
                && (k == 0 || v < values[k - 1])
                && (k + 1 == n || v < values[k + 1])
        })
        .count()
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Plain golden-section search on a bracket. Returns the best point seen.
fn golden_section(
    objective: &mut dyn FnMut(f64) -> f64,
    mut a: f64,
    mut b: f64,
    tol: f64,
    max_iters: usize,
    mut best: (f64, f64),
) -> (f64, f64, usize, bool) {
    let mut evaluations = 0;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = objective(c);
    let mut fd = objective(d);
    evaluations += 2;
    for (x, f) in [(c, fc), (d, fd)] {
        if f < best.1 {
            best = (x, f);
        }
    }
    let mut iters = 0;
    while b - a > tol && iters < max_iters {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = objective(c);
            if fc < best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = objective(d);
            if fd < best.1 {
                best = (d, fd);
            }
        }
        evaluations += 1;
        iters += 1;
    }
    (best.0, best.1, evaluations, b - a <= tol)
}

/// Golden-section search guarded by a coarse pre-scan.
///
/// The pre-scan brackets the best sample. If it shows more than one strict
/// local minimum the search first refines on a dense grid before bracketing.
#[derive(Debug, Clone)]
pub struct GuardedGoldenSection {
    pub prescan_points: usize,
    pub fallback_points: usize,
    pub max_iters: usize,
}

impl Default for GuardedGoldenSection {
    fn default() -> Self {
        GuardedGoldenSection {
            prescan_points: 64,
            fallback_points: 4096,
            max_iters: 200,
        }
    }
}

impl Minimizer for GuardedGoldenSection {
    fn name(&self) -> &'static str {
        "golden"
    }

    fn minimize(&self, objective: &mut dyn FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Minimum {
        if !(hi > lo) {
            let value = objective(lo);
            return Minimum {
                x: lo,
                value,
                evaluations: 1,
                converged: true,
                non_unimodal: false,
            };
        }

        let mut xs: Vec<f64> = linspace(lo, hi, self.prescan_points.max(3)).collect();
        let mut values: Vec<f64> = xs.iter().map(|&x| objective(x)).collect();
        let mut evaluations = xs.len();
        let non_unimodal = count_local_minima(&values) > 1;
        if non_unimodal {
            xs = linspace(lo, hi, self.fallback_points.max(3)).collect();
            values = xs.iter().map(|&x| objective(x)).collect();
            evaluations += xs.len();
        }

        let k = argmin(&values);
        let a = xs[k.saturating_sub(1)];
        let b = xs[(k + 1).min(xs.len() - 1)];
        let (x, value, n, converged) =
            golden_section(objective, a, b, tol, self.max_iters, (xs[k], values[k]));
        Minimum {
            x,
            value,
            evaluations: evaluations + n,
            converged,
            non_unimodal,
        }
    }
}

/// Exhaustive evaluation on a uniform grid.
#[derive(Debug, Clone)]
pub struct DenseGrid {
    pub points: usize,
}

impl Default for DenseGrid {
    fn default() -> Self {
        DenseGrid { points: 100_001 }
    }
}

impl Minimizer for DenseGrid {
    fn name(&self) -> &'static str {
        "grid"
    }

    fn minimize(&self, objective: &mut dyn FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Minimum {
        let n = if hi > lo { self.points.max(2) } else { 1 };
        let xs: Vec<f64> = linspace(lo, hi, n).collect();
        let values: Vec<f64> = xs.iter().map(|&x| objective(x)).collect();
        let k = argmin(&values);
        let spacing = if n > 1 { (hi - lo) / (n - 1) as f64 } else { 0.0 };
        Minimum {
            x: xs[k],
            value: values[k],
            evaluations: n,
            converged: spacing <= tol,
            non_unimodal: count_local_minima(&values) > 1,
        }
    }
}

type Constructor = fn() -> Box<dyn Minimizer>;

/// Name → constructor table of available minimizers.
#[derive(Clone)]
pub struct MinimizerRegistry {
    entries: BTreeMap<&'static str, Constructor>,
}

impl fmt::Debug for MinimizerRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.keys()).finish()
    }
}

impl Default for MinimizerRegistry {
    fn default() -> Self {
        let mut registry = MinimizerRegistry {
            entries: BTreeMap::new(),
        };
        registry.register("golden", || Box::new(GuardedGoldenSection::default()));
        registry.register("grid", || Box::new(DenseGrid::default()));
        registry
    }
}

impl MinimizerRegistry {
    pub fn register(&mut self, name: &'static str, constructor: Constructor) {
        self.entries.insert(name, constructor);
    }

    pub fn create(&self, name: &str) -> Result<Box<dyn Minimizer>> {
        self.entries.get(name).map(|ctor| ctor()).ok_or_else(|| {
            let known: Vec<_> = self.entries.keys().copied().collect();
            Error::validation("optimizer.method", format!("unknown method {name:?}, expected one of {known:?}"))
        })
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }
}
