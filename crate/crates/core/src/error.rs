use std::fmt;

use thiserror::Error;

/// Which general-position condition a degenerate state violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum Condition {
    /// Common intersections of Voronoi domains have the wrong dimension.
    I,
    /// Common intersections of bounding spheres have the wrong dimension.
    II,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::I => write!(f, "I"),
            Condition::II => write!(f, "II"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("balls {0} and {1} have coincident centers")]
    CoincidentCenters(usize, usize),

    #[error("spheres {0} and {1} do not properly intersect")]
    NoIntersection(usize, usize),

    #[error("spheres {0}, {1}, {2} do not meet in two distinct points")]
    DegenerateTriple(usize, usize, usize),

    #[error("degenerate state: condition {condition} violated by {simplex:?} (residual {residual:e})")]
    DegenerateState {
        condition: Condition,
        simplex: Vec<usize>,
        residual: f64,
    },

    #[error("spherical triangle is not realizable (product of sines {0:e})")]
    NonRealizableTriangle(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("finite-difference evaluation hit a degenerate state: {0}")]
    OracleDegenerate(String),

    #[error("event cannot be classified: {0}")]
    Unclassifiable(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid input at line {line}: {message}")]
    Validation { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::DegenerateState { .. }
                | Error::DegenerateTriple(..)
                | Error::NonRealizableTriangle(_)
                | Error::NoIntersection(..)
                | Error::OracleDegenerate(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
