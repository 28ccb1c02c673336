use thiserror::Error;

use crate::quadrature::QuadratureResult;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input lies outside the weak-coupling domain or violates a type invariant.
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("quadrature exhausted its budget of {budget} evaluations (partial value {:e}, error {:e})", partial.value, partial.error_estimate)]
    Budget {
        budget: usize,
        partial: QuadratureResult,
    },

    #[error("quadrature produced a non-finite value")]
    NonFinite,

    #[error("invalid temperature grid: {0}")]
    Grid(String),

    #[error("malformed table: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::Domain {
        name,
        value,
        reason,
    }
}
