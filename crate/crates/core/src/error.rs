//! Error type shared by every module of the crate.

use thiserror::Error;

/// Which side of the base point `ξ(0) = 1` a boundary point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Counterclockwise from the base point (the arc `I⁺`).
    Plus,
    /// Clockwise from the base point (the arc `I⁻`).
    Minus,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Plus => f.write_str("plus"),
            Side::Minus => f.write_str("minus"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: bad schema, non-monotone grid, wrong normalization.
    #[error("validation error: {0}")]
    Validation(String),

    /// A driver with zero horizon generates no slit.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// A point was passed outside the domain of a map.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate Möbius triple: {0}")]
    DegenerateTriple(String),

    /// The downward flow ran into the driving singularity.
    #[error("trajectory hit the singularity at t = {time}")]
    HitSingularity { time: f64 },

    #[error("integration failure at t = {time}: {reason}")]
    IntegrationFailure { time: f64, reason: String },

    /// The boundary approach to the singularity was not monotone.
    #[error("boundary flow diagnostics: {0}")]
    Diagnostics(String),

    #[error("trace extrapolation did not converge at t = {time} (residual {residual:e})")]
    TraceFailure { time: f64, residual: f64 },

    #[error("welding extraction failed on the {side} side at t = {time}: {reason}")]
    Extraction { side: Side, time: f64, reason: String },

    #[error("derivative error: {0}")]
    Derivative(String),

    /// Two refinement levels of a quadrature disagreed.
    #[error("quadrature did not converge: coarse {coarse:e}, fine {fine:e}")]
    Accuracy { coarse: f64, fine: f64 },

    #[error("continuity mismatch of {mismatch:e} at angle {angle}")]
    Continuity { angle: f64, mismatch: f64 },

    #[error("Beltrami coefficient of modulus {0} exceeds its admissible bound (must stay below 1)")]
    NotQuasiconformal(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_)
            | Error::DegenerateInput(_)
            | Error::Domain(_)
            | Error::DegenerateTriple(_)
            | Error::NotQuasiconformal(_)
            | Error::Io(_)
            | Error::Json(_)
            | Error::Csv(_) => 2,
            Error::HitSingularity { .. }
            | Error::IntegrationFailure { .. }
            | Error::Diagnostics(_)
            | Error::TraceFailure { .. } => 3,
            Error::Accuracy { .. } => 4,
            Error::Extraction { .. } | Error::Derivative(_) | Error::Continuity { .. } => 5,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
