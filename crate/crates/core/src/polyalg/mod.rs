//! Exact multivariate polynomial algebra over the rationals.
//!
//! Everything here is exact except [`roots`], which isolates real roots exactly
//! and then hands back floating approximations together with the isolating
//! rational intervals.

mod gcd;
mod parse;
mod poly;
mod resultant;
mod roots;
mod univariate;

pub use gcd::{gcd, primitive_in, square_free_part, sqrt_exact};
pub use parse::parse_rational;
pub use poly::{from_f64, q, qf, to_f64, var_rank, F64Poly, Monomial, Polynomial, Rational};
pub use resultant::{discriminant, exact_divide, resultant, try_exact_divide};
pub use roots::{
    near_real_roots_f64, real_roots_f64, roots, roots_with_width, ComplexPair, RealRoot, RootSet, NEAR_REAL_ETA,
};
pub use univariate::UPoly;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("polynomial has degree {degree} in `{var}`, at least {required} required")]
    DegreeTooLow {
        var: String,
        degree: u32,
        required: u32,
    },
    #[error("exact division failed: nonzero remainder in `{var}`")]
    NotDivisible { var: String },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("expected a univariate polynomial, found variables {vars:?}")]
    NotUnivariate { vars: Vec<String> },
    #[error("the zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error("requested width {requested:e} is below the achievable {achieved:e}")]
    Precision { requested: f64, achieved: f64 },
    #[error("not a perfect square; obstruction: {obstruction}")]
    NotSquare { obstruction: String },
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("invalid JSON polynomial: {0}")]
    Json(String),
    #[error("no value supplied for variable `{0}`")]
    UnknownVariable(String),
}
