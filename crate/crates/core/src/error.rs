use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("arity mismatch: {left} vs {right} parameters")]
    ArityMismatch { left: usize, right: usize },

    #[error("parameter index {index} out of range for {arity} parameters")]
    IndexOutOfRange { index: usize, arity: usize },

    #[error("chart mismatch: series in {left} combined with series in {right}")]
    ChartMismatch { left: char, right: char },

    #[error("cannot compose a series with negative exponent w^{exponent}")]
    UnsupportedComposition { exponent: i64 },

    #[error("parse error at offset {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("{name} is not a section of I^2: monomial {monomial} has y-degree {degree}")]
    NotInIdealSquare {
        name: &'static str,
        monomial: String,
        degree: u32,
    },

    #[error("invalid twist: {0}")]
    InvalidTwist(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("not a Laufer curve: {0}")]
    NotLaufer(String),

    #[error("not a coboundary: first component has w^{exponent}, inside the H^1 window")]
    NotACoboundary { exponent: i64 },

    #[error("not Calabi-Yau: m - n = {0}, expected -2")]
    NotCalabiYau(i64),

    #[error("integrability fails at (i, j) = ({i}, {j}): difference {difference}")]
    Integrability {
        i: usize,
        j: usize,
        difference: String,
    },

    #[error("fixed-point iteration did not stabilise within {iterations} steps")]
    NonTermination { iterations: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("finite-difference check failed: deviation {deviation:e} > {tolerance:e} at {point:?}")]
    FdCheck {
        deviation: f64,
        tolerance: f64,
        point: Vec<f64>,
    },

    #[error("internal consistency: {0}")]
    Internal(String),
}
