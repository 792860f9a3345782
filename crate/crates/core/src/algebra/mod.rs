//! Exact arithmetic substrate: Laurent polynomials and rational functions in
//! the torus variables, with arbitrary-precision rational coefficients.

mod fraction;
mod laurent;

pub use fraction::{LaurentRational, NotPolynomial};
pub use laurent::{Exponents, LaurentPoly};

pub(crate) use laurent::rational_to_f64;

/// Nearest double to an exact rational.
pub fn to_f64(c: &num_rational::BigRational) -> f64 {
    rational_to_f64(c)
}

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("zero raised to a negative power")]
    ZeroToNegativePower,
    #[error("evaluation point is a pole")]
    PoleAtEvaluationPoint,
    #[error("operation requires rank 1")]
    UnivariateOnly,
}
