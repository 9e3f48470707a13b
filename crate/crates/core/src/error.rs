use thiserror::Error;

use crate::proximal::ProxResult;

/// Errors raised by space construction, metric queries and solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point does not belong to this space: {0}")]
    ForeignPoint(String),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} out of range: {value} not in [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("table is not convex: slope {next} after {prev} at knot {index}")]
    NonConvexTable { index: usize, prev: f64, next: f64 },

    #[error("objective construction failed: {0}")]
    Objective(String),

    #[error("prox certificate {certificate:e} exceeds tolerance {tolerance:e}")]
    Solver {
        certificate: f64,
        tolerance: f64,
        best: Box<ProxResult>,
    },

    #[error("unsupported descriptor: {0}")]
    Descriptor(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
