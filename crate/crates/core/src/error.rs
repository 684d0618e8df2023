use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

use crate::variants::VariantKind;

/// Which end of a confidence interval a diagnostic refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lower,
    Upper,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Lower => f.write_str("lower"),
            Side::Upper => f.write_str("upper"),
        }
    }
}

/// Coarse grouping of errors, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad arguments or parameters.
    Usage,
    /// Unreadable or malformed input data.
    Data,
    /// The numerical procedure could not produce a result.
    Numerical,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("a sample needs at least 2 observations, got {0}")]
    TooFewObservations(usize),

    #[error("observation {index} is not finite ({value})")]
    NonFiniteObservation { index: usize, value: f64 },

    #[error("ordinate t must lie strictly inside (0, 1), got {0}")]
    InvalidOrdinate(f64),

    #[error("zero is not interior to the convex hull of the estimating values")]
    ConvexHullViolation,

    #[error("non-finite value while computing {0}")]
    NonFinite(&'static str),

    #[error("degenerate variance: the truncated-and-centred values are constant, interval undefined")]
    DegenerateVariance,

    #[error("{kind} interval: statistic never crosses the threshold on the {side} side (search stopped at {boundary})")]
    BracketFailure {
        kind: VariantKind,
        side: Side,
        boundary: f64,
    },

    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("quadrature did not converge on [{lower}, {upper}]")]
    QuadratureFailure { lower: f64, upper: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{path}: {message}", path = path.display())]
    File { path: PathBuf, message: String },

    #[error("column '{0}' not found in header")]
    Schema(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::File { .. } | Error::Schema(_) => ErrorClass::Data,
            Error::TooFewObservations(_) | Error::NonFiniteObservation { .. } => ErrorClass::Data,
            Error::InvalidOrdinate(_) | Error::Domain { .. } | Error::InvalidParameter(_) => {
                ErrorClass::Usage
            }
            Error::ConvexHullViolation
            | Error::NonFinite(_)
            | Error::DegenerateVariance
            | Error::BracketFailure { .. }
            | Error::QuadratureFailure { .. } => ErrorClass::Numerical,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
