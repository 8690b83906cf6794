use alloc::string::String;

use crate::expr::{EvalError, ParseError};

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("evaluation failure at node {index} (angle {angle})")]
    Evaluation { index: usize, angle: f64 },
    #[error("radius outside disk of analyticity: r = {r}, R = {big_r}")]
    RadiusOutsideDisk { r: f64, big_r: f64 },
    #[error("invalid argument: {0}")]
    Domain(&'static str),
    #[error("condition number undefined")]
    ConditionUndefined,
    #[error("no interior minimizer found")]
    NoInteriorMinimizer,
    #[error("saddle iteration did not converge (last iterate {re} + {im}i)")]
    SaddleNotConverged { re: f64, im: f64 },
    #[error("evaluation at a zero of f")]
    ZeroOfFunction,
    #[error("not a branch point")]
    NotABranchPoint,
    #[error("pole of the gamma function")]
    Pole,
    #[error("iteration did not converge")]
    NotConverged,
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
    #[error("no strategy applicable; missing metadata: {0}")]
    NoStrategy(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

pub type Result<T> = core::result::Result<T, Error>;
