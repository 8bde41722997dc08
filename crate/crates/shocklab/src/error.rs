//! Crate-wide error type.

use crate::flux::AdmissibilityReport;
use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug)]
pub enum Error {
    /// Shock endpoints coincide; the Rankine-Hugoniot quotient is undefined.
    DegenerateShock {
        u_minus: f64,
        u_plus: f64,
    },
    /// A flux specification violates its own contract (a <= 0, bad bound, ...).
    InvalidFlux(String),
    /// The certified `g2_bound` fails a dense sampling check on the dynamic range.
    G2BoundViolated {
        at: f64,
        observed: f64,
        bound: f64,
    },
    /// A run was requested for a shock that fails the contraction hypotheses.
    NotAdmissible(AdmissibilityReport),
    /// Profile tabulation cannot reach the far-field states on the requested width.
    ProfileWidth {
        half_width: f64,
        detail: String,
    },
    /// A field was paired with an operator or field on a different grid.
    GridMismatch {
        expected: String,
        found: String,
    },
    /// Non-finite data where finite values are required.
    NonFinite(String),
    /// Invalid grid or solver parameters.
    InvalidParameter(String),
    /// Configuration file is syntactically or semantically invalid.
    Config(String),
    /// The time stepper detected a stability violation and aborted.
    NumericalAbort {
        t: f64,
        step: u64,
        detail: String,
    },
    /// Malformed persisted artifact (snapshot, CSV, manifest, ...).
    Format(String),
    Io(std::io::Error),
    Json(serde_json::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegenerateShock { u_minus, u_plus } => {
                write!(
                    f,
                    "degenerate shock: u_minus = {u_minus}, u_plus = {u_plus}"
                )
            }
            Error::InvalidFlux(msg) => write!(f, "invalid flux: {msg}"),
            Error::G2BoundViolated {
                at,
                observed,
                bound,
            } => write!(
                f,
                "certified second-derivative bound violated: |g''({at})| = {observed} > {bound}"
            ),
            Error::NotAdmissible(report) => write!(f, "shock not admissible: {report}"),
            Error::ProfileWidth { half_width, detail } => {
                write!(
                    f,
                    "profile tabulation width {half_width} too small: {detail}"
                )
            }
            Error::GridMismatch { expected, found } => {
                write!(f, "grid mismatch: expected {expected}, found {found}")
            }
            Error::NonFinite(msg) => write!(f, "non-finite data: {msg}"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::Config(msg) => write!(f, "config error: {msg}"),
            Error::NumericalAbort { t, step, detail } => {
                write!(f, "numerical abort at t = {t} (step {step}): {detail}")
            }
            Error::Format(msg) => write!(f, "format error: {msg}"),
            Error::Io(e) => write!(f, "io error: {e}"),
            Error::Json(e) => write!(f, "json error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            Error::Json(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e)
    }
}
