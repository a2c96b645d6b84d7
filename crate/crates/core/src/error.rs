use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("field length {got} does not match grid ({expected} values expected)")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite value {value} at index {index}")]
    NonFinite { index: usize, value: f64 },
    #[error("CFL violation at x = {x}: |nu| = {nu} > 1")]
    Cfl { x: f64, nu: f64 },
    #[error("invalid time specification: {0}")]
    InvalidTime(String),
    #[error("no control with finite H*")]
    NoFiniteControl,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown problem `{0}`")]
    UnknownProblem(String),
    #[error("oracle undefined at x = {x}")]
    OracleUndefined { x: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
