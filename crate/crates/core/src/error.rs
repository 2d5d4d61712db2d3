use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Why an equation/evaluation pair was refused before any summation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Rejection {
    /// The evaluation point is the singular point itself.
    ZeroPoint,
    /// The second-derivative coefficient vanishes.
    ZeroS,
    /// The requested branch hits a vanishing recursion denominator.
    DegenerateIndicial,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Rejection::ZeroPoint => "ZeroPoint",
            Rejection::ZeroS => "ZeroS",
            Rejection::DegenerateIndicial => "DegenerateIndicial",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0}")]
    Rejected(Rejection),

    #[error("NonConvergence: stopping criterion not met after {terms} terms")]
    NonConvergence { terms: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("NoSignChange: shooting function has the same sign at {lo} and {hi}")]
    NoSignChange { lo: String, hi: String },

    #[error("BoundaryTooSmall: eigenvalue moved by 10^{lg_shift:.1} when the boundary was pushed out")]
    BoundaryTooSmall { lg_shift: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl From<Rejection> for Error {
    fn from(r: Rejection) -> Self {
        Error::Rejected(r)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
