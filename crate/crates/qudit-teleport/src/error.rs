//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by shape construction, indexing, gate kernels and the
/// protocol pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// The qudit dimension S is below the minimum of 2.
    #[error("s-level must be ≥ 2 (got {0})")]
    InvalidDimension(usize),

    /// The requested qubit count cannot embed the S-level qudit.
    #[error("{qubit_count} qubit(s) span {n_dim} basis states, fewer than the s-level {s_level}")]
    InsufficientQubits {
        s_level: usize,
        qubit_count: usize,
        n_dim: usize,
    },

    /// The state vector would exceed the configured amplitude cap.
    #[error("state vector needs {required} amplitudes, exceeding the cap of {cap}")]
    CapacityExceeded { required: u128, cap: usize },

    /// A basis label, particle index or gate parameter is out of range.
    #[error("{name} = {value} out of range (must be < {bound})")]
    IndexOutOfRange {
        name: &'static str,
        value: usize,
        bound: usize,
    },

    /// Two states (or a state and a gate) disagree on their register.
    #[error("register mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    /// An amplitude vector has the wrong length for its register.
    #[error("amplitude vector has length {found}, register needs {expected}")]
    LengthMismatch { expected: usize, found: usize },

    /// Input amplitudes are not normalized and auto-normalization is off.
    #[error("input state has norm {norm} (must be 1 within 1e-9; pass normalize to rescale)")]
    NotNormalized { norm: f64 },

    /// A forced measurement outcome carries no probability mass.
    #[error("outcome (j={j}, n={n}) has probability {probability:.3e}, cannot collapse onto it")]
    ImpossibleOutcome {
        j: usize,
        n: usize,
        probability: f64,
    },

    /// An outcome distribution does not sum to one or has negative entries.
    #[error("malformed outcome distribution: {reason}")]
    MalformedDistribution { reason: String },

    /// A corrected Bob state leaked amplitude outside the embedded subspace.
    #[error("corrected state carries amplitude {max_amplitude:.3e} on basis labels ≥ s-level")]
    SubspaceLeakage { max_amplitude: f64 },

    /// A state input file does not match the expected schema.
    #[error("malformed state file: {reason}")]
    StateFile { reason: String },

    /// A sweep was requested with an empty or inverted S range.
    #[error("s-level range is empty: --s-min {min} exceeds --s-max {max}")]
    InvalidRange { min: usize, max: usize },

    /// Reading input or writing a report failed.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
