//! Measurement-device-independent QKD simulator with a third-party relay
//! that mounts CNOT-based eavesdropping attacks.
//!
//! Modules, bottom up:
//! - [`qcore`]: statevector engine over at most four qubits.
//! - [`protocol`]: encoding, honest relay, flip rule and sifting.
//! - [`attack`]: Eve's interactions, stored ancillas and deferred measurement.
//! - [`stats`]: Monte Carlo sessions, estimators and reference values.
//! - [`verify`]: analytic reproduction of the reference tables.
//! - [`cli`]: the `mdiqkd` command.

pub mod attack;
pub mod cli;
pub mod error;
pub mod protocol;
pub mod qcore;
pub mod stats;
pub mod verify;

pub use error::{ConfigError, Error};
