use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CountingError {
    #[error("{what} must be >= {min}, got {got}")]
    TooSmall { what: &'static str, min: u64, got: u64 },
    #[error("polynomial {0} is identically zero")]
    ZeroPolynomial(usize),
    #[error("polynomial {index} has degree {degree} above the system bound {d}")]
    DegreeAbove { index: usize, degree: usize, d: usize },
    #[error("exact enumeration needs n = 1, got n = {0}")]
    NotUnivariate(usize),
    #[error("polynomial has {got} variables, system has {expected}")]
    Arity { expected: usize, got: usize },
    #[error("exponential sum is identically zero")]
    ZeroFunction,
    #[error("exponents {0} and {1} coincide")]
    RepeatedExponent(usize, usize),
    #[error("empty or reversed interval [{0}, {1}]")]
    Interval(f64, f64),
    #[error("scan needs at least {needed} points, got {got}")]
    ScanTooCoarse { needed: usize, got: usize },
    #[error("distance floor is only defined for s = 1, got s = {0}")]
    NotOneDimensional(usize),
}
