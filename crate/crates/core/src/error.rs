use thiserror::Error;

use crate::qcore::StateError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("zeta must lie in [0, 1], got {0}")]
    InvalidZeta(f64),
    #[error("a session needs at least one round")]
    NoRounds,
    #[error("sweep needs at least one zeta value")]
    EmptySweep,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    State(#[from] StateError),
}
