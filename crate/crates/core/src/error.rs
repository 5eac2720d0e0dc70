use alloc::string::String;
use core::fmt;

/// Errors produced by curve construction and the cutting loop.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A profile or flux was configured inconsistently.
    Config(String),
    /// The declared convexity tag disagrees with sampled f''.
    ConvexityMismatch {
        declared: &'static str,
        at_u: f64,
        second_deriv: f64,
    },
    /// Profile support is empty or degenerate.
    EmptySupport,
    /// A polyline failed a structural precondition.
    BadPolyline(String),
    /// A vertical cut line does not close a lobe through the anchor vertex.
    MalformedFold(String),
    /// The cutting loop exceeded its stationary-point bound.
    NonTermination { cuts: u32, bound: u32 },
    /// Root bracket for the area balance had no sign change.
    BracketInvalid { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    /// Final curve area drifted from the initial area beyond tolerance.
    AreaDrift { drift: f64, tol: f64 },
    /// Shock ordinal could not be matched across nearby times.
    UnmatchedShock { index: usize, t: f64 },
    /// A sweep aborted because one of its slices failed.
    SliceFailed { t: f64, message: String },
    /// A shock with (near-)zero height cannot carry a displacement estimate.
    DegenerateShock,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
            Error::ConvexityMismatch {
                declared,
                at_u,
                second_deriv,
            } => write!(
                f,
                "flux declared {declared} but f''({at_u}) = {second_deriv}"
            ),
            Error::EmptySupport => write!(f, "profile support is empty"),
            Error::BadPolyline(msg) => write!(f, "invalid polyline: {msg}"),
            Error::MalformedFold(msg) => write!(f, "malformed fold: {msg}"),
            Error::NonTermination { cuts, bound } => write!(
                f,
                "cut loop did not terminate: {cuts} cuts exceed bound {bound}"
            ),
            Error::BracketInvalid { lo, hi, f_lo, f_hi } => write!(
                f,
                "root bracket [{lo}, {hi}] has no sign change (f: {f_lo}, {f_hi})"
            ),
            Error::AreaDrift { drift, tol } => {
                write!(f, "area drift {drift} exceeds tolerance {tol}")
            }
            Error::UnmatchedShock { index, t } => {
                write!(f, "shock #{index} could not be matched near t = {t}")
            }
            Error::SliceFailed { t, message } => {
                write!(f, "sweep slice at t = {t} failed: {message}")
            }
            Error::DegenerateShock => write!(f, "shock height too small for estimate"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
