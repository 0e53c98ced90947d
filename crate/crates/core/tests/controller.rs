mod common;

use common::*;
use tecopt::controller::{
    replay_environment, run_closed_loop, ControllerConfig, HoldPolicy, PlantState, Reading, SimTrace,
};
use tecopt::io::csv::{read_readings, write_trace};
use tecopt::presets::{converging_scenario, run_scenario};
use tecopt::{minimize_gamma, tec1_12704, CurrentBounds};

// Equilibrium of the converging scenario from the Newton root-solve oracle.
const T_C_EQ: f64 = 294.7722532599703;
const T_H_EQ: f64 = 306.3464013524226;

#[test]
fn converging_scenario_reaches_root_solve_equilibrium() {
    let m = tec1_12704();
    let sim = converging_scenario();
    let (tc, th, _) = plant_fixed_point(&m, &sim.plant, (T_C_EQ, T_H_EQ), m.i_max);
    assert!((tc - T_C_EQ).abs() < 1e-9 && (th - T_H_EQ).abs() < 1e-9);

    let trace = run_scenario(&m, &sim).unwrap();
    let last = trace.last().unwrap();
    assert!((last.environment.t_cold - tc).abs() <= 1e-6, "{}", last.environment.t_cold);
    assert!((last.environment.t_hot - th).abs() <= 1e-6, "{}", last.environment.t_hot);
}

#[test]
fn start_at_equilibrium_holds_current() {
    let m = tec1_12704();
    let mut sim = converging_scenario();
    sim.initial = Some(PlantState {
        t: 0.0,
        t_cold: T_C_EQ,
        t_hot: T_H_EQ,
    });
    sim.duration = 200.0;
    let trace = run_scenario(&m, &sim).unwrap();
    let i0 = trace.records[0].current;
    for r in &trace.records {
        assert!((r.current - i0).abs() < 1e-6, "t = {}: {} vs {i0}", r.t, r.current);
        assert!((r.environment.t_cold - T_C_EQ).abs() < 1e-6);
    }
}

#[test]
fn every_tick_is_optimal() {
    let m = tec1_12704();
    let mut sim = converging_scenario();
    sim.duration = 1500.0;
    sim.controller.update_period = 5.0;
    let trace = run_scenario(&m, &sim).unwrap();
    let n = 10_001;
    let spacing = m.i_max / (n - 1) as f64;
    let mut ticks = 0;
    for r in trace.records.iter().filter(|r| r.controller_tick) {
        let (x, _) = grid_argmin(|i| gamma_or_inf(&m, &r.environment, i), 0.0, m.i_max, n);
        assert!((r.current - x).abs() <= spacing, "t = {}: {} vs {x}", r.t, r.current);
        ticks += 1;
    }
    assert_eq!(ticks, 301);
}

#[test]
fn replay_single_reference_reading_equals_optimizer() {
    let m = tec1_12704();
    let cfg = ControllerConfig {
        tol: 1e-8,
        ..ControllerConfig::default()
    };
    let readings = [Reading {
        t: 0.0,
        environment: fig2_env(),
    }];
    let trace = replay_environment(&m, &cfg, &readings).unwrap();
    let direct = minimize_gamma(&m, &fig2_env(), &CurrentBounds::for_module(&m), 1e-8).unwrap();
    assert_eq!(trace.len(), 1);
    let r = &trace.records[0];
    assert_eq!(r.current, direct.i_star);
    assert_eq!(r.point, direct.operating_point);
    assert_eq!(r.exergy, Some(direct.exergy));
    assert!((r.current - argmin_oracle(&m, &fig2_env(), 0.0, 4.0)).abs() < 1e-6);
}

#[test]
fn trace_csv_round_trips_readings() {
    let m = tec1_12704();
    let mut sim = converging_scenario();
    sim.duration = 50.0;
    sim.dt = 0.7;
    let trace = run_scenario(&m, &sim).unwrap();
    let mut buf = Vec::new();
    write_trace(&mut buf, &trace).unwrap();
    let readings = read_readings(buf.as_slice()).unwrap();
    assert_eq!(readings.len(), trace.len());
    for (reading, record) in readings.iter().zip(&trace.records) {
        assert_eq!(reading.t, record.t);
        assert_eq!(reading.environment, record.environment);
    }
}

/// `C_c·ΔT_C` minus the trapezoidal integral of the cold-node net heat.
fn bookkeeping_discrepancy(trace: &SimTrace, sim: &tecopt::io::SimulationConfig) -> f64 {
    let p = &sim.plant;
    let net = |k: usize| {
        let r = &trace.records[k];
        p.cold_net_heat(&r.state(), &r.point)
    };
    let integral: f64 = (1..trace.len())
        .map(|k| 0.5 * (net(k - 1) + net(k)) * (trace.records[k].t - trace.records[k - 1].t))
        .sum();
    let first = trace.records.first().unwrap().environment.t_cold;
    let last = trace.last().unwrap().environment.t_cold;
    p.c_cold * (last - first) - integral
}

#[test]
fn bookkeeping_error_is_first_order() {
    let m = tec1_12704();
    let mut sim = converging_scenario();
    sim.duration = 400.0;
    sim.controller.bounds = Some(CurrentBounds::new(1.0, 1.0).unwrap());
    sim.controller.update_period = 2.0;
    let mut errors = Vec::new();
    for dt in [2.0, 1.0, 0.5] {
        sim.dt = dt;
        errors.push(bookkeeping_discrepancy(&run_scenario(&m, &sim).unwrap(), &sim).abs());
    }
    for w in errors.windows(2) {
        let ratio = w[0] / w[1];
        assert!((1.8..=2.2).contains(&ratio), "{errors:?}");
    }
}

#[test]
fn infeasible_readings_apply_hold_current() {
    let m = tec1_12704();
    let readings = [
        Reading {
            t: 0.0,
            environment: fig2_env(),
        },
        Reading {
            t: 1.0,
            environment: env(200.0, 330.0, 1.0, 2.0),
        },
    ];
    let last = replay_environment(&m, &ControllerConfig::default(), &readings).unwrap();
    assert_eq!(last.records[1].current, last.records[0].current);
    assert!(last.records[1].exergy.is_none());

    let fixed = ControllerConfig {
        hold_on_infeasible: HoldPolicy::Fixed(0.25),
        ..ControllerConfig::default()
    };
    let trace = replay_environment(&m, &fixed, &readings).unwrap();
    assert_eq!(trace.records[1].current, 0.25);
}

#[test]
fn closed_loop_rejects_unstable_step() {
    let m = tec1_12704();
    let sim = converging_scenario();
    let limit = sim.plant.max_stable_step();
    let cfg = ControllerConfig {
        update_period: 2.0 * limit,
        ..ControllerConfig::default()
    };
    let err = run_closed_loop(&m, &sim.plant, &cfg, &sim.initial_state(), 10.0, 1.5 * limit).unwrap_err();
    assert_eq!(err.name(), "UnstableStep");
}
