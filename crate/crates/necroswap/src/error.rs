use thiserror::Error;

/// Errors surfaced by state, circuit and search operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("qubit {qubit} out of range for width {width}")]
    QubitOutOfRange { qubit: usize, width: usize },

    #[error("width {width} exceeds the configured cap of {cap} qubits")]
    WidthExceedsCap { width: usize, cap: usize },

    #[error("matrix is not unitary (max |U\u{2020}U - I| entry = {deviation:.3e})")]
    NonUnitary { deviation: f64 },

    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("states are not orthogonal (|overlap| = {overlap:.3e})")]
    NonOrthogonal { overlap: f64 },

    #[error("zero vector has no canonical phase")]
    ZeroVector,

    #[error("amplitude vector length {len} is not a power of two")]
    NotPowerOfTwo { len: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
