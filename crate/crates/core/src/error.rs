use thiserror::Error;

/// Errors raised while building codes, parsing inputs or running decoders.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operator length mismatch: {left} vs {right} qubits")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid Pauli character {ch:?} at position {position}")]
    InvalidPauliChar { ch: char, position: usize },

    #[error("empty Pauli string")]
    EmptyPauli,

    #[error("code has no checks")]
    NoChecks,

    #[error("checks {first} and {second} anticommute")]
    NonCommutingChecks { first: usize, second: usize },

    #[error("check {index} is a product of earlier checks")]
    DependentCheck { index: usize },

    #[error("rows {first} and {second} have odd overlap; matrix is not self-dual")]
    NotSelfDual { first: usize, second: usize },

    #[error("matrix row {index} is linearly dependent on earlier rows")]
    RankDeficient { index: usize },

    #[error("invalid bicycle parameters: {0}")]
    InvalidBicycleSpec(String),

    #[error("bicycle generation failed after {attempts} attempts: {reason}")]
    GenerationFailed { attempts: usize, reason: String },

    #[error("unknown builtin code {0:?}")]
    UnknownBuiltin(String),

    #[error("empty generating vector")]
    EmptyVector,

    #[error("invalid probability vector for qubit {qubit}: {reason}")]
    InvalidPrior { qubit: usize, reason: String },

    #[error("invalid decoder configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid syndrome: {0}")]
    InvalidSyndrome(String),

    #[error("instance too large for exhaustive enumeration: {0}")]
    SizeBound(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
