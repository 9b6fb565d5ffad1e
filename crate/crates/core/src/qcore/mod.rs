//! Small statevector engine: up to four qubits, the gates the protocol
//! needs, and computational / Bell-basis measurement with collapse.

mod bell;
mod decompose;
mod error;
mod gate;
mod measure;
mod rng;
mod state;

pub use bell::BellOutcome;
pub use decompose::{bell_decompose, BellDecomposition, WirePair};
pub use error::StateError;
pub use gate::Gate;
pub use measure::{
    bell_probabilities, computational_probabilities, measure_bell, measure_computational,
    sample_index, BitString,
};
pub use rng::TrialRng;
pub use state::{Amplitude, StateVector, MAX_QUBITS, STATE_TOL};
