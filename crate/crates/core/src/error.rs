use thiserror::Error;

use crate::relations::ConsistencyReport;

/// Errors raised by table construction, the segment charts and the locus explorer.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("entry {0} is not strictly positive")]
    NonPositiveEntry(usize),

    #[error("entries sum to {0}, not 1")]
    NotNormalized(f64),

    #[error("entry {0} is not a finite number")]
    NonFinite(usize),

    #[error("parameter {name} = {value} lies outside ({lower}, {upper})")]
    OutOfRangeParameter {
        name: &'static str,
        value: f64,
        lower: f64,
        upper: f64,
    },

    #[error("{name} must be strictly positive and finite, got {value}")]
    NonPositiveRatio { name: &'static str, value: f64 },

    #[error("table is not independent: cross ratio {0} differs from 1")]
    NotIndependent(f64),

    #[error("duplicate constraint for {0}")]
    DuplicateConstraint(String),

    #[error("deleted column {0} is out of range (expected 0, 1 or 2)")]
    BadColumn(usize),

    #[error("assignment is inconsistent ({} violated relation(s))", .0.violations.len())]
    InconsistentAssignment(Box<ConsistencyReport>),

    #[error("no solutions found from {starts} starts")]
    NoSolutionsFound { starts: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
