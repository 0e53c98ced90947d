use thiserror::Error;

/// Every failure the model, optimizer and simulator can report.
///
/// Variants fall into three classes (see [`ErrorClass`]) which the CLI maps
/// onto stable exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid {field}: {reason}")]
    Validation { field: String, reason: String },

    #[error("balance system is singular (determinant {determinant:e}, scale {scale:e})")]
    SingularSystem { determinant: f64, scale: f64 },

    #[error("non-physical junction temperature (T_Cj = {t_cold_junction} K, T_Hj = {t_hot_junction} K)")]
    NonPhysicalTemperature {
        t_cold_junction: f64,
        t_hot_junction: f64,
    },

    #[error("hot junction ({t_hot_junction} K) is not above cold junction ({t_cold_junction} K); reversible COP undefined")]
    DegenerateGradient {
        t_cold_junction: f64,
        t_hot_junction: f64,
    },

    #[error("no useful cooling (Q_C = {q_cold} W)")]
    NoUsefulCooling { q_cold: f64 },

    #[error("no electrical drive (W = {power} W)")]
    NoDrive { power: f64 },

    #[error("infeasible: no current in [{i_min}, {i_max}] A gives Q_C > 0 and W > 0")]
    InfeasibleProblem { i_min: f64, i_max: f64 },

    #[error("unstable step: dt = {dt} s exceeds the explicit-Euler limit {limit} s")]
    UnstableStep { dt: f64, limit: f64 },

    #[error("malformed input at row {row}: {reason}")]
    MalformedInput { row: usize, reason: String },

    #[error("i/o failure: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Input rejected before any model evaluation.
    Validation,
    /// The model itself could not produce a result.
    Model,
    /// The optimization problem has no feasible current.
    Infeasible,
    /// Reading or writing data failed.
    Io,
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// Stable identifier printed on the diagnostic stream.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Validation { .. } => "ValidationError",
            Error::SingularSystem { .. } => "SingularSystem",
            Error::NonPhysicalTemperature { .. } => "NonPhysicalTemperature",
            Error::DegenerateGradient { .. } => "DegenerateGradient",
            Error::NoUsefulCooling { .. } => "NoUsefulCooling",
            Error::NoDrive { .. } => "NoDrive",
            Error::InfeasibleProblem { .. } => "InfeasibleProblem",
            Error::UnstableStep { .. } => "UnstableStep",
            Error::MalformedInput { .. } => "MalformedInput",
            Error::Io(_) => "IoError",
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Validation { .. } | Error::MalformedInput { .. } => ErrorClass::Validation,
            Error::InfeasibleProblem { .. } => ErrorClass::Infeasible,
            Error::Io(_) => ErrorClass::Io,
            _ => ErrorClass::Model,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

/// Rejects non-finite or non-positive values.
pub(crate) fn require_positive(field: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::validation(field, format!("must be finite and > 0, got {value}")))
    }
}

pub(crate) fn require_non_negative(field: &str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::validation(field, format!("must be finite and >= 0, got {value}")))
    }
}

pub(crate) fn require_finite(field: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::validation(field, format!("must be finite, got {value}")))
    }
}
