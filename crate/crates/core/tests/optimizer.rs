mod common;

use common::*;
use proptest::prelude::*;
use tecopt::optimizer::{feasible_interval, sweep_environment, EnvParameter, FEASIBILITY_TOLERANCE};
use tecopt::presets::HOT_TEMPERATURES;
use tecopt::{minimize_gamma, tec1_12704, CurrentBounds, Optimizer};

// Oracle values on T_C = 300 K, T_H = 305 K, L_C = 1 W/K, L_H = 2 W/K.
const I_STAR: f64 = 0.454946704274684;
const GAMMA_STAR: f64 = 7.221833135544281;
const FEASIBLE_LO: f64 = 0.12027835899779336;

#[test]
fn reference_optimum() {
    let m = tec1_12704();
    let r = minimize_gamma(&m, &fig2_env(), &CurrentBounds::for_module(&m), 1e-8).unwrap();
    assert!((r.i_star - I_STAR).abs() < 1e-6, "{}", r.i_star);
    assert!((r.gamma_star - GAMMA_STAR).abs() < 1e-11, "{}", r.gamma_star);
    assert!(r.converged && !r.non_unimodal);
}

#[test]
fn reference_feasible_interval() {
    let m = tec1_12704();
    let iv = feasible_interval(&m, &fig2_env(), &CurrentBounds::for_module(&m)).unwrap();
    assert!(iv.lo >= FEASIBLE_LO && iv.lo - FEASIBLE_LO <= FEASIBILITY_TOLERANCE, "{iv:?}");
    assert_eq!(iv.hi, 4.0);
}

#[test]
fn grid_method_matches_oracle_within_spacing() {
    let m = tec1_12704();
    let e = fig2_env();
    let r = Optimizer::by_name("grid", 1e-4)
        .unwrap()
        .minimize(&m, &e, &CurrentBounds::for_module(&m))
        .unwrap();
    let iv = r.feasible_interval;
    assert!((r.i_star - I_STAR).abs() <= (iv.hi - iv.lo) / 100_000.0);
}

#[test]
fn optimal_current_rises_with_hot_temperature() {
    let m = tec1_12704();
    let rows = sweep_environment(
        &m,
        &fig2_env(),
        EnvParameter::HotTemperature,
        &HOT_TEMPERATURES,
        &CurrentBounds::for_module(&m),
        &Optimizer::default(),
    );
    let currents: Vec<f64> = rows.iter().map(|r| r.result.as_ref().unwrap().i_star).collect();
    assert!(currents.windows(2).all(|w| w[1] > w[0]), "{currents:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn golden_matches_brute_force(
        tc in 270.0..310.0f64,
        dt in 0.0..30.0f64,
        lc in 0.5..5.0f64,
        lh in 0.5..5.0f64,
    ) {
        let m = tec1_12704();
        let e = env(tc, tc + dt, lc, lh);
        let n = 10_001;
        let (grid_x, grid_min) = grid_argmin(|i| gamma_or_inf(&m, &e, i), 0.0, 4.0, n);
        match minimize_gamma(&m, &e, &CurrentBounds::for_module(&m), 1e-8) {
            Ok(r) => {
                prop_assert!((r.i_star - grid_x).abs() <= 4.0 / (n - 1) as f64, "{} vs {grid_x}", r.i_star);
                prop_assert!(r.gamma_star <= grid_min + 1e-9);
            }
            Err(e) => prop_assert!(grid_min.is_infinite(), "{e}"),
        }
    }

    #[test]
    fn optimum_respects_arbitrary_bounds(lo in 0.0..4.0f64, width in 0.0..4.0f64) {
        let m = tec1_12704();
        let b = CurrentBounds::new(lo, (lo + width).min(4.0)).unwrap();
        if let Ok(r) = minimize_gamma(&m, &fig2_env(), &b, 1e-6) {
            prop_assert!(b.min <= r.i_star && r.i_star <= b.max);
        }
    }
}
