use thiserror::Error;

use super::state::MAX_QUBITS;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("qubit count {0} outside supported range 1..={MAX_QUBITS}")]
    QubitCount(usize),
    #[error("amplitude vector length {0} is not a power of two")]
    Dimension(usize),
    #[error("ket list is empty")]
    NoKets,
    #[error("ket label {label:?} has {found} qubits, expected {expected}")]
    LabelLength {
        label: String,
        expected: usize,
        found: usize,
    },
    #[error("invalid ket symbol {0:?}; expected one of 0, 1, +, -")]
    Symbol(char),
    #[error("state has zero norm")]
    ZeroVector,
    #[error("amplitude is NaN or infinite")]
    NonFinite,
    #[error("wire {wire} out of range for a {n_qubits}-qubit state")]
    WireOutOfRange { wire: usize, n_qubits: usize },
    #[error("wire {0} used twice in one operation")]
    DuplicateWire(usize),
    #[error("expected a {expected}-qubit state, got {found} qubits")]
    WrongQubitCount { expected: usize, found: usize },
    #[error("Bell pairs must cover every wire of the state exactly once")]
    NotPermutation,
    #[error("projection onto the requested state has zero probability")]
    ZeroProjection,
}
