use thiserror::Error;

use crate::vars::VarId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("polynomials belong to different variable universes (n = {0} vs n = {1})")]
    UniverseMismatch(u8, u8),

    #[error("variable index {index} out of range for n = {n}")]
    IndexOutOfRange { index: u8, n: u8 },

    #[error("cannot differentiate in {0}: negative exponents present")]
    DifferentiateNegative(VarId),

    #[error("cannot substitute a non-invertible polynomial into a negative power of {0}")]
    NonInvertibleSubstitution(VarId),

    #[error("monomial inverse would give a negative exponent of {0}")]
    NegativeExponent(VarId),

    #[error("no value assigned to {0}")]
    MissingVariable(VarId),

    #[error("zero raised to a negative power of {0}")]
    ZeroToNegativePower(VarId),

    #[error("not an element of V: monomial {0} is not squarefree in the X variables (or involves Y, mu, z)")]
    NotInV(String),

    #[error("periodic Lax matrix requires n >= 3 (got n = {0})")]
    PeriodicTooSmall(u8),

    #[error("inexact polynomial division")]
    InexactDivision,

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("non-finite state at t = {0}")]
    NonFiniteState(f64),

    #[error("invalid flow state: {0}")]
    InvalidState(String),

    #[error("invalid JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
