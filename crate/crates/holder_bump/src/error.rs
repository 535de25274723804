use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HolderError {
    #[error("smoothness l must be finite and > 0, got {0}")]
    Smoothness(f64),
    #[error("dimension s must be >= 1")]
    Dimension,
    #[error("point has {got} coordinates, expected {expected}")]
    PointDimension { expected: usize, got: usize },
    #[error("coordinate {index} = {value} lies outside [0, 1]")]
    OutOfDomain { index: usize, value: f64 },
    #[error("cells per axis r must be >= 1")]
    CellCount,
    #[error("sign sequence has length {got}, expected r^s = {expected}")]
    SignLength { expected: usize, got: usize },
    #[error("sign entry {index} is {value}, expected +1 or -1")]
    SignValue { index: usize, value: i8 },
    #[error("family parameter {name} = {value} must be >= 1")]
    FamilyParam { name: &'static str, value: f64 },
    #[error("grid step {0} too coarse for the tiling")]
    GridStep(f64),
}
