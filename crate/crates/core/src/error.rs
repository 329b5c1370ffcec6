use thiserror::Error;

use crate::metric::MetricFault;
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid metric: {0}")]
    Metric(MetricFault),

    #[error("measure is not in V0: total mass is {0}")]
    NotInV0(Rational),

    #[error("degenerate pair: point {0} paired with itself")]
    DegeneratePair(usize),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("point index {index} out of range for a space of {len} points")]
    PointIndex { index: usize, len: usize },

    #[error("duplicate point {0} in subset")]
    DuplicatePoint(usize),

    #[error("size limit exceeded: {what} is {actual}, limit {limit}")]
    SizeLimit {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("polyhedron is unbounded")]
    Unbounded,

    #[error("function is not admissible: pair ({0}, {1}) fails")]
    Inadmissible(usize, usize),

    #[error("distance constraint violated: {0}")]
    Constraint(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid function family: {0}")]
    Family(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
