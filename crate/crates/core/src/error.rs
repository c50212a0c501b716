use thiserror::Error;

/// Errors raised by the core numerics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("size guard exceeded for {what}: {requested} > {limit}")]
    SizeGuard {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("qubit index {qubit} out of range for {n} qubits")]
    InvalidQubit { qubit: usize, n: usize },

    #[error("qubit index {0} listed more than once")]
    DuplicateQubit(usize),

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(&'static str),

    #[error("expectation value has imaginary residual {0}")]
    ImaginaryResidual(f64),

    #[error("alpha = {alpha} is below the minimum {min}")]
    InvalidAlpha { alpha: usize, min: usize },

    #[error("parameter {name} = {value} is out of range")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("bipartition must leave both sides non-empty")]
    DegenerateSplit,

    #[error("{0}")]
    Unsupported(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
