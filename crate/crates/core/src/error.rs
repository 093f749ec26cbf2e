use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {op} got {left} and {right}")]
    DimensionMismatch {
        op: &'static str,
        left: String,
        right: String,
    },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("invalid shape {rows}x{cols} for {len} entries")]
    InvalidShape {
        rows: usize,
        cols: usize,
        len: usize,
    },
    #[error("empty vector or matrix")]
    Empty,
    #[error("non-finite value at position {index}")]
    NonFinite { index: usize },
    #[error("non-boolean entry {value} at [{row},{col}]")]
    NonBoolean {
        row: usize,
        col: usize,
        value: String,
    },
    #[error("entry {value} at [{row},{col}] is not a non-negative integer")]
    NonIntegerWeight {
        row: usize,
        col: usize,
        value: String,
    },
    #[error("entry {value} at [{row},{col}] is not real")]
    ComplexWeight {
        row: usize,
        col: usize,
        value: String,
    },
    #[error("zero state: the squared norm must be positive")]
    ZeroState,
    #[error("marble count overflow")]
    CountOverflow,
    #[error("{0}")]
    InvalidState(String),
    #[error("matrix fails {class} validation with {count} violation(s)")]
    Validation { class: &'static str, count: usize },
    #[error("regime mismatch: {left} vs {right}")]
    RegimeMismatch {
        left: &'static str,
        right: &'static str,
    },
    #[error("state kind {state} does not match {regime} system")]
    StateKindMismatch {
        state: &'static str,
        regime: &'static str,
    },
    #[error("invalid bitstring {0:?}")]
    InvalidBits(String),
    #[error("unknown gate {0:?}")]
    UnknownGate(String),
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("gate {0:?} is classical and cannot be placed in a quantum circuit")]
    ClassicalInQuantumCircuit(String),
    #[error("unknown scenario {0:?}")]
    UnknownScenario(String),
    #[error("unknown oracle {0:?}")]
    UnknownOracle(String),
}

pub(crate) fn shape(rows: usize, cols: usize) -> String {
    format!("{rows}x{cols}")
}
