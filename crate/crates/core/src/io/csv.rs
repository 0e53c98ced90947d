//! CSV dialect shared by every table: comma separated, `.` decimal, one
//! header row, `NA` for undefined values, `\n` line endings. Numbers are
//! written in shortest round-trip form.

use std::io::{Read, Write};

use csv::{ReaderBuilder, Terminator, WriterBuilder};

use crate::controller::{Reading, SimTrace};
use crate::error::{Error, Result};
use crate::exergy::ExergyReport;
use crate::optimizer::{CurrentSweepRow, EnvParameter, EnvironmentSweepRow, OptimizationResult};
use crate::steady_state::{Environment, OperatingPoint};

pub const NA: &str = "NA";

pub fn format_value(v: Option<f64>) -> String {
    match v {
        Some(0.0) => "0".to_string(),
        Some(x) if x.is_finite() => format!("{x}"),
        _ => NA.to_string(),
    }
}

fn num(x: f64) -> String {
    format_value(Some(x))
}

/// Column-oriented table writer.
pub struct Table<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> Table<W> {
    pub fn new(sink: W, header: &[&str]) -> Result<Self> {
        let mut inner = WriterBuilder::new().terminator(Terminator::Any(b'\n')).from_writer(sink);
        inner.write_record(header)?;
        Ok(Table { inner })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.inner.write_record(fields)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.inner.flush()?;
        Ok(())
    }
}

pub const POINT_COLUMNS: &[&str] = &["I", "Q_C", "Q_H", "W", "V", "COP", "T_Cj", "T_Hj"];
pub const EXERGY_COLUMNS: &[&str] = &["s_gen", "COP_rev", "Q_C_max", "Q_C_loss", "eta_II", "gamma"];
pub const ENVIRONMENT_COLUMNS: &[&str] = &["T_C", "T_H", "L_C", "L_H"];

fn point_fields(current: f64, op: Option<&OperatingPoint>) -> Vec<String> {
    let mut out = vec![num(current)];
    match op {
        Some(op) => out.extend([
            num(op.q_cold),
            num(op.q_hot),
            num(op.power),
            format_value(op.voltage),
            format_value(op.cop),
            num(op.t_cold_junction),
            num(op.t_hot_junction),
        ]),
        None => out.extend(std::iter::repeat_n(NA.to_string(), POINT_COLUMNS.len() - 1)),
    }
    out
}

fn exergy_fields(report: Option<&ExergyReport>) -> Vec<String> {
    match report {
        Some(r) => vec![
            num(r.s_gen),
            num(r.cop_rev),
            num(r.q_cold_max),
            num(r.q_cold_loss),
            num(r.eta_ii),
            num(r.gamma),
        ],
        None => vec![NA.to_string(); EXERGY_COLUMNS.len()],
    }
}

fn environment_fields(env: &Environment) -> Vec<String> {
    vec![num(env.t_cold), num(env.t_hot), num(env.l_cold), num(env.l_hot)]
}

fn header(parts: &[&[&'static str]]) -> Vec<&'static str> {
    parts.iter().flat_map(|p| p.iter().copied()).collect()
}

/// One row per operating point: `I`, flows, junction temperatures and the
/// exergy report.
pub fn write_operating_points<W: Write>(sink: W, rows: &[CurrentSweepRow]) -> Result<()> {
    let mut table = Table::new(sink, &header(&[POINT_COLUMNS, EXERGY_COLUMNS]))?;
    for r in rows {
        let mut fields = point_fields(r.current, r.point.as_ref());
        fields.extend(exergy_fields(r.exergy.as_ref()));
        table.row(fields)?;
    }
    table.finish()
}

pub const OPTIMUM_COLUMNS: &[&str] = &[
    "I_star",
    "gamma_star",
    "I_lo",
    "I_hi",
    "evaluations",
    "converged",
    "non_unimodal",
    "method",
    "status",
];

fn optimum_fields(result: &Result<OptimizationResult>) -> Vec<String> {
    let mut out = Vec::new();
    match result {
        Ok(r) => {
            out.extend([
                num(r.i_star),
                num(r.gamma_star),
                num(r.feasible_interval.lo),
                num(r.feasible_interval.hi),
                r.evaluations.to_string(),
                r.converged.to_string(),
                r.non_unimodal.to_string(),
                r.method.to_string(),
                "ok".to_string(),
            ]);
            let op = &r.operating_point;
            out.extend(point_fields(op.current, Some(op)).into_iter().skip(1));
            out.extend(exergy_fields(Some(&r.exergy)));
        }
        Err(e) => {
            out.extend(std::iter::repeat_n(NA.to_string(), OPTIMUM_COLUMNS.len() - 1));
            out.push(e.name().to_string());
            out.extend(std::iter::repeat_n(NA.to_string(), POINT_COLUMNS.len() - 1 + EXERGY_COLUMNS.len()));
        }
    }
    out
}

fn optimum_header() -> Vec<&'static str> {
    let mut h = header(&[ENVIRONMENT_COLUMNS, OPTIMUM_COLUMNS]);
    h.extend(header(&[POINT_COLUMNS]).into_iter().skip(1));
    h.extend(header(&[EXERGY_COLUMNS]));
    h
}

/// Single optimization result with its environment.
pub fn write_optimum<W: Write>(sink: W, env: &Environment, result: &Result<OptimizationResult>) -> Result<()> {
    let mut table = Table::new(sink, &optimum_header())?;
    let mut fields = environment_fields(env);
    fields.extend(optimum_fields(result));
    table.row(fields)?;
    table.finish()
}

/// One optimization per swept environment value. Rows whose problem is
/// infeasible carry `NA` and the error name in `status`.
pub fn write_environment_sweep<W: Write>(sink: W, parameter: EnvParameter, rows: &[EnvironmentSweepRow]) -> Result<()> {
    let mut h = vec!["parameter", "value"];
    h.extend(optimum_header());
    let mut table = Table::new(sink, &h)?;
    for r in rows {
        let mut fields = vec![parameter.symbol().to_string(), num(r.value)];
        fields.extend(environment_fields(&r.environment));
        fields.extend(optimum_fields(&r.result));
        table.row(fields)?;
    }
    table.finish()
}

/// A family of current sweeps, one per environment value, each tagged with
/// the optimum of its curve.
pub struct CurveFamily {
    pub parameter: EnvParameter,
    pub curves: Vec<(EnvironmentSweepRow, Vec<CurrentSweepRow>)>,
}

pub fn write_curve_family<W: Write>(sink: W, family: &CurveFamily) -> Result<()> {
    let mut h = vec!["parameter", "value"];
    h.extend(header(&[ENVIRONMENT_COLUMNS, POINT_COLUMNS, EXERGY_COLUMNS]));
    h.extend(["I_star", "gamma_star"]);
    let mut table = Table::new(sink, &h)?;
    for (optimum, rows) in &family.curves {
        let (i_star, gamma_star) = match &optimum.result {
            Ok(r) => (Some(r.i_star), Some(r.gamma_star)),
            Err(_) => (None, None),
        };
        for r in rows {
            let mut fields = vec![family.parameter.symbol().to_string(), num(optimum.value)];
            fields.extend(environment_fields(&optimum.environment));
            fields.extend(point_fields(r.current, r.point.as_ref()));
            fields.extend(exergy_fields(r.exergy.as_ref()));
            fields.extend([format_value(i_star), format_value(gamma_star)]);
            table.row(fields)?;
        }
    }
    table.finish()
}

/// Trace rows: `t`, the environment (`T_C, T_H, L_C, L_H`), whether the
/// controller re-optimized, then the operating point and exergy report.
pub fn write_trace<W: Write>(sink: W, trace: &SimTrace) -> Result<()> {
    let mut h = vec!["t"];
    h.extend(ENVIRONMENT_COLUMNS);
    h.push("tick");
    h.extend(header(&[POINT_COLUMNS, EXERGY_COLUMNS]));
    let mut table = Table::new(sink, &h)?;
    for r in &trace.records {
        let mut fields = vec![num(r.t)];
        fields.extend(environment_fields(&r.environment));
        fields.push(u8::from(r.controller_tick).to_string());
        fields.extend(point_fields(r.current, Some(&r.point)));
        fields.extend(exergy_fields(r.exergy.as_ref()));
        table.row(fields)?;
    }
    table.finish()
}

/// Reads `t, T_C, T_H, L_C, L_H` by header name; other columns are ignored,
/// so a written trace can be read back directly. Row numbers in errors count
/// data rows from 1.
pub fn read_readings<R: Read>(source: R) -> Result<Vec<Reading>> {
    let mut reader = ReaderBuilder::new().trim(csv::Trim::All).from_reader(source);
    let headers = reader
        .headers()
        .map_err(|e| Error::MalformedInput { row: 0, reason: e.to_string() })?
        .clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MalformedInput {
                row: 0,
                reason: format!("missing column {name}"),
            })
    };
    let idx = [column("t")?, column("T_C")?, column("T_H")?, column("L_C")?, column("L_H")?];
    let mut out = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let row = k + 1;
        let record = record.map_err(|e| Error::MalformedInput { row, reason: e.to_string() })?;
        let mut v = [0.0; 5];
        for (slot, &i) in v.iter_mut().zip(&idx) {
            let field = record.get(i).unwrap_or("");
            *slot = field
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::MalformedInput {
                    row,
                    reason: format!("column {} is not a finite number: {field:?}", headers.get(i).unwrap_or("?")),
                })?;
        }
        out.push(Reading {
            t: v[0],
            environment: Environment {
                t_cold: v[1],
                t_hot: v[2],
                l_cold: v[3],
                l_hot: v[4],
            },
        });
    }
    Ok(out)
}
