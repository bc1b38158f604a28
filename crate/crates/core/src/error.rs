//! Crate-wide error type.

use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("mismatched variable tables: {left} vs {right} variables")]
    VariableMismatch { left: usize, right: usize },

    #[error("degenerate curve: p has a multiple zero (deg gcd(p, p') > 0)")]
    DegenerateCurve,

    #[error("genus below 1: need deg p >= 3, got {0}")]
    GenusBelowOne(usize),

    #[error("leading coefficient a0 must be a nonzero rational, got {0}")]
    BadLeadingCoefficient(String),

    #[error("derivative vanishes: Schwarzian derivative needs f' != 0")]
    DerivativeVanishes,

    #[error("expansion order {requested} exceeds the configured truncation bound {bound}")]
    Truncation { requested: i64, bound: i64 },

    #[error("series coefficient at order {requested} is beyond the computed validity {valid_to}")]
    SeriesOrder { requested: i64, valid_to: i64 },

    #[error("inconsistent linear system: row {row} reduces to 0 = {value}")]
    InconsistentSystem { row: usize, value: String },

    #[error("system is not linear in the unknowns: {0}")]
    NotLinear(String),

    #[error("symmetry condition violated: [[R]_1]_2 != [[R]_2]_1 (difference {0})")]
    SymmetryCondition(String),

    #[error("operation requires odd curve degree n, got n = {0}")]
    RequiresOddDegree(usize),

    #[error("regular-bracket oracle has no entry for {0}")]
    MissingOracleEntry(String),

    #[error("invalid minimal model ({p},{q}): p, q must be coprime and >= 2")]
    InvalidModel { p: i64, q: i64 },

    #[error("constraint solve failed: {0}")]
    Solve(String),

    #[error("assembly check failed: {0}")]
    Assembly(String),

    #[error("curve file parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
