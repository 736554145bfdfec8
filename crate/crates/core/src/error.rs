use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("quadrature did not converge: estimate {estimate:e}, residual {residual:e}")]
    Quadrature { estimate: f64, residual: f64 },

    #[error("non-finite integrand value at t = {at}")]
    NonFinite { at: f64 },

    #[error("boundary singularity at atom x = {x}")]
    BoundarySingularity { x: f64 },

    #[error("principal value did not converge: last iterates {last:e} and {previous:e}")]
    PrincipalValue { last: f64, previous: f64 },

    #[error("exceptional class: {0}")]
    Exceptional(String),

    #[error("precondition failed: {what} (measured {measured:e})")]
    Precondition { what: String, measured: f64 },

    #[error("spec error: {0}")]
    Spec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
