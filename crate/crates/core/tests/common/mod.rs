//! Brute-force reference implementations used to check the library.
//!
//! Everything here is written from the balance equations directly and shares
//! no code with the crate under test.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tecopt::{Environment, ModuleParams};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn env(t_cold: f64, t_hot: f64, l_cold: f64, l_hot: f64) -> Environment {
    Environment::new(t_cold, t_hot, l_cold, l_hot).unwrap()
}

pub fn fig2_env() -> Environment {
    env(300.0, 305.0, 1.0, 2.0)
}

/// Junction balances evaluated at given junction temperatures.
fn junction_flows(m: &ModuleParams, i: f64, tcj: f64, thj: f64) -> (f64, f64) {
    let (a, r, k) = (m.seebeck, m.resistance, m.conductance);
    let qc = a * i * tcj - 0.5 * r * i * i - k * (thj - tcj);
    let qh = a * i * thj + 0.5 * r * i * i - k * (thj - tcj);
    (qc, qh)
}

/// Residuals of both balances after substituting the exchanger relations,
/// each scaled by the largest term it contains.
pub fn relative_residuals(m: &ModuleParams, e: &Environment, i: f64, qc: f64, qh: f64) -> (f64, f64) {
    let tcj = e.t_cold - qc / e.l_cold;
    let thj = e.t_hot + qh / e.l_hot;
    let (a, r, k) = (m.seebeck, m.resistance, m.conductance);
    let cold = [qc, a * i * tcj, 0.5 * r * i * i, k * (thj - tcj), k * thj, k * tcj];
    let hot = [qh, a * i * thj, 0.5 * r * i * i, k * (thj - tcj), k * thj, k * tcj];
    let (fc, fh) = junction_flows(m, i, tcj, thj);
    let scale = |terms: &[f64]| terms.iter().fold(f64::MIN_POSITIVE, |s, t| s.max(t.abs()));
    ((qc - fc).abs() / scale(&cold), (qh - fh).abs() / scale(&hot))
}

/// Damped fixed-point iteration on the junction temperatures. `None` if it
/// fails to settle.
pub fn fixed_point_flows(m: &ModuleParams, e: &Environment, i: f64) -> Option<(f64, f64)> {
    let (mut tcj, mut thj) = (e.t_cold, e.t_hot);
    for damping in [0.5, 0.2, 0.05] {
        for _ in 0..200_000 {
            let (qc, qh) = junction_flows(m, i, tcj, thj);
            let ncj = e.t_cold - qc / e.l_cold;
            let nhj = e.t_hot + qh / e.l_hot;
            let step = (ncj - tcj).abs().max((nhj - thj).abs());
            if !step.is_finite() || step > 1e6 {
                break;
            }
            tcj += damping * (ncj - tcj);
            thj += damping * (nhj - thj);
            if step <= 1e-13 * tcj.abs().max(thj.abs()) {
                return Some(junction_flows(m, i, tcj, thj));
            }
        }
        tcj = e.t_cold;
        thj = e.t_hot;
    }
    None
}

/// Heat flows by Cramer's rule on the assembled 2×2 system.
pub fn cramer_flows(m: &ModuleParams, e: &Environment, i: f64) -> (f64, f64) {
    let (a, r, k) = (m.seebeck, m.resistance, m.conductance);
    // Unknowns (qc, qh). Substitute tcj = T_C - qc/L_C, thj = T_H + qh/L_H.
    let m11 = 1.0 + a * i / e.l_cold + k / e.l_cold;
    let m12 = k / e.l_hot;
    let m21 = k / e.l_cold;
    let m22 = 1.0 - a * i / e.l_hot + k / e.l_hot;
    let dt = e.t_hot - e.t_cold;
    let b1 = a * i * e.t_cold - 0.5 * r * i * i - k * dt;
    let b2 = a * i * e.t_hot + 0.5 * r * i * i - k * dt;
    let det = m11 * m22 - m12 * m21;
    ((b1 * m22 - m12 * b2) / det, (m11 * b2 - m21 * b1) / det)
}

/// Loss ratio from first principles, `None` outside the feasible set.
pub fn gamma_oracle(m: &ModuleParams, e: &Environment, i: f64) -> Option<f64> {
    let (qc, qh) = cramer_flows(m, e, i);
    let w = qh - qc;
    let tcj = e.t_cold - qc / e.l_cold;
    let thj = e.t_hot + qh / e.l_hot;
    if !(qc > 0.0 && w > 0.0 && thj > tcj && tcj > 0.0) {
        return None;
    }
    let q_max = w * tcj / (thj - tcj);
    Some((q_max - qc) / qc)
}

pub fn gamma_or_inf(m: &ModuleParams, e: &Environment, i: f64) -> f64 {
    gamma_oracle(m, e, i).unwrap_or(f64::INFINITY)
}

/// Uniform grid `lo..=hi` with `n` points.
pub fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

/// `(argmin, min)` of `f` on an `n`-point grid.
pub fn grid_argmin(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> (f64, f64) {
    grid(lo, hi, n)
        .into_iter()
        .map(|x| (x, f(x)))
        .fold((f64::NAN, f64::INFINITY), |best, c| if c.1 < best.1 { c } else { best })
}

/// Optimal current by grid bracketing and bisection on the slope sign.
pub fn argmin_oracle(m: &ModuleParams, e: &Environment, lo: f64, hi: f64) -> f64 {
    let n = 10_001;
    let (x0, _) = grid_argmin(|i| gamma_or_inf(m, e, i), lo, hi, n);
    let h = (hi - lo) / (n - 1) as f64;
    let (mut a, mut b) = ((x0 - h).max(lo), (x0 + h).min(hi));
    let slope = |x: f64| {
        let d = 1e-5;
        gamma_or_inf(m, e, x + d) - gamma_or_inf(m, e, x - d)
    };
    if slope(a) >= 0.0 || slope(b) <= 0.0 {
        // Edge minimum: the grid point is as good as it gets.
        return x0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid == a || mid == b {
            break;
        }
        if slope(mid) > 0.0 {
            b = mid;
        } else {
            a = mid;
        }
    }
    0.5 * (a + b)
}

/// Random module with properties around commercial single-stage values.
pub fn random_module(rng: &mut ChaCha8Rng) -> ModuleParams {
    ModuleParams::new(
        rng.random_range(0.01..0.1),
        rng.random_range(0.5..5.0),
        rng.random_range(0.1..1.0),
        tecopt::te_module::Ratings { i_max: 4.0, v_max: 12.0 },
    )
    .unwrap()
}

pub fn random_env(rng: &mut ChaCha8Rng) -> Environment {
    let t_cold = rng.random_range(260.0..320.0);
    env(
        t_cold,
        t_cold + rng.random_range(-5.0..40.0),
        rng.random_range(0.5..5.0),
        rng.random_range(0.5..5.0),
    )
}

/// Plant equilibrium under the optimal current, by Newton iteration with a
/// finite-difference Jacobian.
pub fn plant_fixed_point(m: &ModuleParams, plant: &tecopt::controller::PlantModel, guess: (f64, f64), i_max: f64) -> (f64, f64, f64) {
    let residual = |tc: f64, th: f64| {
        let e = env(tc, th, plant.l_cold, plant.l_hot);
        let i = argmin_oracle(m, &e, 0.0, i_max);
        let (qc, qh) = cramer_flows(m, &e, i);
        (
            plant.u_cold_ambient * (plant.t_ambient - tc) + plant.q_internal - qc,
            qh - plant.u_hot_ambient * (th - plant.t_ambient),
            i,
        )
    };
    let (mut tc, mut th) = guess;
    for _ in 0..50 {
        let (f1, f2, _) = residual(tc, th);
        let h = 1e-4;
        let (a1, a2, _) = residual(tc + h, th);
        let (b1, b2, _) = residual(tc, th + h);
        let j11 = (a1 - f1) / h;
        let j21 = (a2 - f2) / h;
        let j12 = (b1 - f1) / h;
        let j22 = (b2 - f2) / h;
        let det = j11 * j22 - j12 * j21;
        let dtc = (f1 * j22 - j12 * f2) / det;
        let dth = (j11 * f2 - j21 * f1) / det;
        tc -= dtc;
        th -= dth;
        if dtc.abs().max(dth.abs()) < 1e-10 {
            break;
        }
    }
    let (_, _, i) = residual(tc, th);
    (tc, th, i)
}
