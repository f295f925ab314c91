use thiserror::Error;

use crate::circuits::ParseError;

/// Errors raised by state construction, channels, decoders and circuits.
#[derive(Clone, Debug, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("qubit index {index} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { index: usize, num_qubits: usize },
    #[error("dimension {0} is not a power of two")]
    NotQubitRegister(usize),
    #[error("register of {0} qubits exceeds the dense simulation limit")]
    RegisterTooLarge(usize),
    #[error("state is not normalized: norm {0}")]
    NotNormalized(f64),
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
    #[error("invalid projector: {0}")]
    InvalidProjector(String),
    #[error("projectors do not resolve the identity (deviation {0:.3e})")]
    IncompleteMeasurement(f64),
    #[error("outcome {outcome} has probability {probability:.3e}")]
    DegenerateOutcome { outcome: usize, probability: f64 },
    #[error("operator is not an isometry (deviation {0:.3e})")]
    NotIsometric(f64),
    #[error("state support leaks outside the expected subspace (residual {0:.3e})")]
    SupportLeak(f64),
    #[error("decoded state is not pure (purity {0:.12})")]
    NotPure(f64),
    #[error("vectors are not orthonormal (deviation {0:.3e})")]
    NotOrthonormal(f64),
    #[error("invalid code parameters: {0}")]
    InvalidParams(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid gate: {0}")]
    InvalidGate(String),
    #[error("circuit cannot be written in text form: {0}")]
    NotPrintable(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
