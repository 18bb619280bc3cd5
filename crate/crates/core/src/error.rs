use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    IndexOutOfRange { index: usize, n_qubits: usize },

    #[error("agent and environment qubit coincide (qubit {0})")]
    SameQubit(usize),

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("expectation value has imaginary part {0:e}; operator is not Hermitian")]
    NonHermitian(f64),

    #[error("dense operation limited to {limit} qubits, got {requested}")]
    DenseGuard { limit: usize, requested: usize },

    #[error("enumeration limited to {limit}, got {requested}")]
    EnumerationGuard { limit: usize, requested: usize },

    #[error("step {n} out of range 1..={max}")]
    StepOutOfRange { n: usize, max: usize },

    #[error("empty cluster subset")]
    EmptySubset,

    #[error("empty orbit")]
    EmptyOrbit,

    #[error("invalid sign pattern: {0}")]
    InvalidPattern(String),

    #[error("missing trajectory for weighted pattern {0}")]
    MissingTrajectory(String),

    #[error("trajectory for {pattern} has {len} samples, step {step} requested")]
    TrajectoryTooShort {
        pattern: String,
        len: usize,
        step: usize,
    },

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("recursion history value Z[{step}] for M={sites} not retained")]
    MissingHistory { sites: usize, step: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
