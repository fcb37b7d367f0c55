use thiserror::Error;

/// Errors raised by the exact and numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("integer square root of negative number {0}")]
    NegativeSqrt(String),
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("gcd of two zero polynomials")]
    GcdOfZeros,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(String),
    #[error("no common invariant form")]
    NoInvariantForm,
    #[error("form not unique (solution space has dimension {0})")]
    FormNotUnique(usize),
    #[error("invariant form is degenerate")]
    DegenerateForm,
    #[error("matrix does not preserve the symplectic form")]
    NotSymplectic,
    #[error("characteristic polynomial is not palindromic: {0}")]
    NotPalindromic(String),
    #[error("generator index {index} out of range ({count} generators)")]
    BadGeneratorIndex { index: usize, count: usize },
    #[error("zero exponent in generator word")]
    ZeroExponent,
    #[error("ill-conditioned eigenproblem (relative residual {0:e})")]
    IllConditioned(f64),
    #[error("matrix is not pinching")]
    NotPinching,
    #[error("inconclusive rank (relative minor {0:e} inside the tolerance band)")]
    InconclusiveRank(f64),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("division by zero in Q(sqrt({0}))")]
    FieldDivisionByZero(String),
    #[error("elements of different quadratic fields: Q(sqrt({0})) and Q(sqrt({1}))")]
    FieldMismatch(String, String),
    #[error("mismatch in {quantity}: expected {expected}, found {found}")]
    Mismatch {
        quantity: String,
        expected: String,
        found: String,
    },
    #[error("invalid random walk: {0}")]
    InvalidWalk(String),
    #[error("renorm interval too large: non-finite growth after {0} steps")]
    RenormOverflow(u64),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
