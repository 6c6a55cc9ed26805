//! Error type shared by all core modules.

use core::fmt;

/// Errors reported by state, circuit and audit operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Operand dimensions do not line up (matrix/vector or state/layout).
    DimensionMismatch { expected: usize, got: usize },
    /// A square matrix was required.
    NonSquare { rows: usize, cols: usize },
    /// A Kronecker product would exceed the configured dense-dimension cap.
    KronTooLarge { rows: usize, cols: usize, max: usize },
    /// A matrix entry or amplitude is NaN or infinite.
    NonFiniteEntry { index: usize },
    /// The environment register must have as many qubits as the measured one.
    EnvironmentSizeMismatch { m_qubits: usize, e_qubits: usize },
    /// A register was declared with zero qubits.
    EmptyRegister { register: char },
    /// The layout exceeds the configured total-qubit budget.
    TooManyQubits { total: usize, max: usize },
    /// Dense compilation is capped well below the statevector budget.
    CompileTooLarge { qubits: usize, max: usize },
    /// A gate references a wire index outside its register.
    WireOutOfRange { register: char, index: usize, count: usize },
    /// A multi-qubit gate was given repeated wires.
    DuplicateWires,
    /// An explicit gate matrix has the wrong shape for its arity.
    BadMatrixShape { rows: usize, cols: usize, expected: usize },
    /// An explicit gate matrix failed the unitarity check.
    NotUnitary { deviation: f64 },
    /// The success set must contain at least one outcome.
    EmptySuccessSet,
    /// A success-set element is not a valid outcome of the projection register.
    SuccessOutcomeOutOfRange { outcome: usize, limit: usize },
    /// The output table lacks an entry for a reachable (m, p) pair.
    OutputMapIncomplete { m: usize, p: usize },
    /// The output table has an entry outside (all m) x (success set).
    OutputMapInvalidEntry { m: usize, p: usize },
    /// An explicit amplitude list has the wrong length for the layout.
    WrongStateLength { expected: usize, got: usize },
    /// An explicit amplitude list is numerically zero and cannot be normalized.
    ZeroStateNorm,
    /// A basis-state index is outside the state space.
    BasisIndexOutOfRange { index: usize, dim: usize },
    /// Conditioning on an outcome whose probability is below 1e-12.
    ImpossibleOutcome { register: char, outcome: usize },
    /// The requested fixed projection outcome is not in the success set.
    PStarNotInSuccessSet { p_star: usize },
    /// A basis pairing is not a permutation of the measured-register outcomes.
    InvalidPairing,
    /// The audited initial state never produces a successful outcome.
    AdversaryConstructionFailed { success_probability: f64 },
    /// Sample sequence is empty or has a single category on some axis.
    DegenerateSamples,
    /// Sampling requires at least one draw.
    ZeroSamples,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::NonSquare { rows, cols } => {
                write!(f, "matrix must be square, got {rows}x{cols}")
            }
            Error::KronTooLarge { rows, cols, max } => write!(
                f,
                "kronecker product would be {rows}x{cols}, exceeding the maximum dimension {max}"
            ),
            Error::NonFiniteEntry { index } => {
                write!(f, "non-finite value at index {index}")
            }
            Error::EnvironmentSizeMismatch { m_qubits, e_qubits } => write!(
                f,
                "environment register must match the measured register: M has {m_qubits} qubits, E has {e_qubits}"
            ),
            Error::EmptyRegister { register } => {
                write!(f, "register {register} must have at least one qubit")
            }
            Error::TooManyQubits { total, max } => {
                write!(f, "layout has {total} qubits, exceeding the maximum of {max}")
            }
            Error::CompileTooLarge { qubits, max } => write!(
                f,
                "dense compilation limited to {max} circuit qubits, layout has {qubits}"
            ),
            Error::WireOutOfRange { register, index, count } => write!(
                f,
                "wire {register}{index} out of range: register {register} has {count} qubits"
            ),
            Error::DuplicateWires => write!(f, "gate wires must be distinct"),
            Error::BadMatrixShape { rows, cols, expected } => write!(
                f,
                "gate matrix must be {expected}x{expected}, got {rows}x{cols}"
            ),
            Error::NotUnitary { deviation } => {
                write!(f, "matrix is not unitary (max deviation {deviation:e})")
            }
            Error::EmptySuccessSet => write!(f, "success set must be nonempty"),
            Error::SuccessOutcomeOutOfRange { outcome, limit } => write!(
                f,
                "success outcome {outcome} out of range: projection register has {limit} outcomes"
            ),
            Error::OutputMapIncomplete { m, p } => {
                write!(f, "output map missing entry for m={m}, p={p}")
            }
            Error::OutputMapInvalidEntry { m, p } => write!(
                f,
                "output map entry m={m}, p={p} is outside (all m) x (success set)"
            ),
            Error::WrongStateLength { expected, got } => {
                write!(f, "amplitude list has length {got}, layout requires {expected}")
            }
            Error::ZeroStateNorm => write!(f, "amplitude list is numerically zero"),
            Error::BasisIndexOutOfRange { index, dim } => {
                write!(f, "basis index {index} out of range for dimension {dim}")
            }
            Error::ImpossibleOutcome { register, outcome } => {
                write!(f, "impossible outcome: {register}={outcome} has probability below 1e-12")
            }
            Error::PStarNotInSuccessSet { p_star } => {
                write!(f, "fixed projection outcome {p_star} is not in the success set")
            }
            Error::InvalidPairing => {
                write!(f, "basis pairing must be a permutation of the measured-register outcomes")
            }
            Error::AdversaryConstructionFailed { success_probability } => write!(
                f,
                "adversary construction failed: success probability {success_probability:e} is below 1e-12"
            ),
            Error::DegenerateSamples => {
                write!(f, "independence test needs at least two categories on each axis")
            }
            Error::ZeroSamples => write!(f, "sample count must be at least 1"),
        }
    }
}

impl core::error::Error for Error {}

/// Convenience alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
