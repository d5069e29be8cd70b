use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("matrix is not square ({rows} x {cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("{qubits} qubits exceeds the dense cap of {cap}")]
    ExceedsCap { qubits: usize, cap: usize },
    #[error("operator is not unitary (max deviation {0:e})")]
    NotUnitary(f64),
    #[error("invalid Pauli string: {0}")]
    InvalidPauli(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("bad target qubits: {0}")]
    BadTargets(String),
    #[error("Bell sampling needs an even qubit count, got {0}")]
    OddQubitCount(usize),
    #[error("coefficient map has a zero-magnitude entry")]
    ZeroCoefficient,
    #[error("empty input")]
    EmptyInput,
    #[error("anchor estimate {anchor:e} is not above the accuracy {epsilon:e}; threshold too large or too few snapshots")]
    AnchorTooSmall { anchor: f64, epsilon: f64 },
    #[error("coefficient maps have no overlapping support")]
    NoOverlap,
    #[error("planned query count {planned} exceeds the budget of {budget}")]
    BudgetExceeded { planned: u64, budget: u64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
}
