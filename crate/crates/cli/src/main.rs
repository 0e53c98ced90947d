//! `tecopt` command-line front end.
//!
//! Exit codes: 0 success, 1 i/o failure, 2 invalid input, 3 model error,
//! 4 infeasible problem. Failures print the error name on stderr.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tecopt::controller::replay_environment;
use tecopt::error::{Error, ErrorClass, Result};
use tecopt::exergy::gamma;
use tecopt::io::csv::{read_readings, write_environment_sweep, write_operating_points, write_optimum, write_trace};
use tecopt::io::{parse_grid, RunConfig, SweepPlan};
use tecopt::optimizer::{sweep_current, sweep_environment, CurrentSweepRow};
use tecopt::presets::{run_scenario, PresetContext, PresetRegistry};
use tecopt::te_module::tec1_12704;
use tecopt::{operating_point, Optimizer};

#[derive(Debug, Parser)]
#[command(name = "tecopt", version, about = "Thermoelectric cooler model, loss-ratio optimizer and controller simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file, `-` for stdout.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Steady state and exergy report at one current.
    Solve {
        #[command(flatten)]
        common: Common,
        /// Current (A).
        #[arg(long, allow_negative_numbers = true)]
        current: f64,
    },
    /// Current sweep (`--grid` or the config's sweep section) or environment sweep.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Current grid `start:stop:step` (A).
        #[arg(long)]
        grid: Option<String>,
    },
    /// Current minimizing the loss ratio.
    Optimize {
        #[command(flatten)]
        common: Common,
    },
    /// Closed-loop controller simulation.
    Simulate {
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the controller on recorded readings (`t,T_C,T_H,L_C,L_H`).
    Replay {
        #[command(flatten)]
        common: Common,
        /// Readings CSV.
        #[arg(long)]
        input: PathBuf,
    },
    /// Regenerate a figure dataset.
    Reproduce {
        /// fig2, fig3, fig4a, fig4b, fig4c, fig4d, fig6 or fig7.
        preset: String,
        #[command(flatten)]
        common: Common,
        /// Current grid `start:stop:step` for curve presets (A).
        #[arg(long)]
        grid: Option<String>,
    },
    /// List the available presets.
    Presets,
}

fn exit_code(e: &Error) -> u8 {
    match e.class() {
        ErrorClass::Io => 1,
        ErrorClass::Validation => 2,
        ErrorClass::Model => 3,
        ErrorClass::Infeasible => 4,
    }
}

fn open_out(out: &str) -> Result<Box<dyn Write>> {
    if out == "-" {
        Ok(Box::new(BufWriter::new(io::stdout().lock())))
    } else {
        let file = File::create(out).map_err(|e| Error::Io(format!("{out}: {e}")))?;
        Ok(Box::new(BufWriter::new(file)))
    }
}

fn load(config: Option<&Path>) -> Result<RunConfig> {
    let path = config.ok_or_else(|| Error::Validation {
        field: "--config".into(),
        reason: "this command needs a configuration file".into(),
    })?;
    RunConfig::load(path)
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("TEC_OPT_THREADS") else {
        return Ok(());
    };
    let threads: usize = value.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| Error::Validation {
        field: "TEC_OPT_THREADS".into(),
        reason: format!("expected a positive integer, got {value:?}"),
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Io(e.to_string()))
}

fn solve(common: &Common, current: f64) -> Result<()> {
    let cfg = load(common.config.as_deref())?;
    let m = cfg.module_params()?;
    let env = cfg.environment()?;
    if !current.is_finite() {
        return Err(Error::Validation {
            field: "--current".into(),
            reason: "must be finite".into(),
        });
    }
    let op = operating_point(&m, &env, current)?;
    let report = gamma(&op).ok();
    eprintln!(
        "I = {current} A: Q_C = {:.6} W, Q_H = {:.6} W, W = {:.6} W, T_Cj = {:.4} K, T_Hj = {:.4} K",
        op.q_cold, op.q_hot, op.power, op.t_cold_junction, op.t_hot_junction
    );
    match &report {
        Some(r) => eprintln!(
            "COP = {:.6}, COP_rev = {:.6}, eta_II = {:.6}, gamma = {:.6}, s_gen = {:.6e} W/K",
            op.cop.unwrap_or(f64::NAN),
            r.cop_rev,
            r.eta_ii,
            r.gamma,
            r.s_gen
        ),
        None => eprintln!("gamma undefined at this operating point"),
    }
    let row = CurrentSweepRow {
        current,
        point: Some(op),
        exergy: report,
    };
    write_operating_points(open_out(&common.out)?, &[row])
}

fn sweep(common: &Common, grid: Option<&str>) -> Result<()> {
    let cfg = load(common.config.as_deref())?;
    let m = cfg.module_params()?;
    let env = cfg.environment()?;
    let plan = match grid {
        Some(g) => SweepPlan::Current(parse_grid(g)?),
        None => cfg.sweep_plan()?,
    };
    match plan {
        SweepPlan::Current(grid) => write_operating_points(open_out(&common.out)?, &sweep_current(&m, &env, &grid)),
        SweepPlan::Environment { parameter, values } => {
            let rows = sweep_environment(&m, &env, parameter, &values, &cfg.bounds_for(&m), &cfg.optimizer.build()?);
            write_environment_sweep(open_out(&common.out)?, parameter, &rows)
        }
    }
}

fn optimize(common: &Common) -> Result<()> {
    let cfg = load(common.config.as_deref())?;
    let m = cfg.module_params()?;
    let env = cfg.environment()?;
    let result = cfg.optimizer.build()?.minimize(&m, &env, &cfg.bounds_for(&m));
    let r = result.as_ref().map_err(Clone::clone)?;
    eprintln!("I* = {} A, gamma* = {}", r.i_star, r.gamma_star);
    write_optimum(open_out(&common.out)?, &env, &result)
}

fn simulate(common: &Common) -> Result<()> {
    let cfg = load(common.config.as_deref())?;
    let m = cfg.module_params()?;
    let trace = run_scenario(&m, cfg.simulation()?)?;
    write_trace(open_out(&common.out)?, &trace)
}

fn replay(common: &Common, input: &Path) -> Result<()> {
    let cfg = load(common.config.as_deref())?;
    let m = cfg.module_params()?;
    let file = File::open(input).map_err(|e| Error::Io(format!("{}: {e}", input.display())))?;
    let readings = read_readings(file)?;
    let controller = cfg.simulation.as_ref().map(|s| s.controller.clone()).unwrap_or_default();
    write_trace(open_out(&common.out)?, &replay_environment(&m, &controller, &readings)?)
}

fn reproduce(name: &str, common: &Common, grid: Option<&str>) -> Result<()> {
    let preset = PresetRegistry::default().create(name)?;
    let (module, optimizer) = match common.config.as_deref() {
        Some(path) => {
            let cfg = RunConfig::load(path)?;
            (cfg.module_params()?, cfg.optimizer.build()?)
        }
        None => (tec1_12704(), Optimizer::default()),
    };
    let grid = match grid {
        Some(g) => parse_grid(g)?,
        None => PresetContext::default_grid(&module),
    };
    let ctx = PresetContext { module, optimizer, grid };
    let mut out = open_out(&common.out)?;
    preset.run(&ctx, &mut out)?;
    out.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    configure_threads()?;
    match &cli.command {
        Command::Solve { common, current } => solve(common, *current),
        Command::Sweep { common, grid } => sweep(common, grid.as_deref()),
        Command::Optimize { common } => optimize(common),
        Command::Simulate { common } => simulate(common),
        Command::Replay { common, input } => replay(common, input),
        Command::Reproduce { preset, common, grid } => reproduce(preset, common, grid.as_deref()),
        Command::Presets => {
            let registry = PresetRegistry::default();
            for name in registry.names() {
                println!("{name}\t{}", registry.create(name)?.description());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(exit_code(&e))
        }
    }
}
