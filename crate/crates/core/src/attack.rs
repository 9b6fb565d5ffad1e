//! Third-party eavesdropping by the relay.
//!
//! Eve attaches a `|0⟩` ancilla to each travel qubit and applies
//! `P_u = (H ⊗ I)^u · CNOT · (H ⊗ I)^u` with the travel qubit on the control
//! side. She Bell-measures the two travel qubits for the public announcement
//! and keeps both ancillas. Once the bases are public she either reads the
//! ancillas in the computational basis (when the basis matches `u`) or
//! Bell-measures them, which by entanglement swapping tells her whether the
//! announced outcome introduced a bit error.
//!
//! Wire layout of the joint state is `(A, E1, B, E2)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::protocol::{encode, Basis, DetectionMode, PartyChoice, RelayAnnouncement};
use crate::qcore::{
    bell_decompose, measure_bell, measure_computational, BellDecomposition, BellOutcome,
    BitString, Gate, StateError, StateVector, TrialRng,
};

pub const WIRE_A: usize = 0;
pub const WIRE_E1: usize = 1;
pub const WIRE_B: usize = 2;
pub const WIRE_E2: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyKind {
    Honest,
    Cnot,
    HadamardCnot,
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StrategyKind::Honest => "honest",
            StrategyKind::Cnot => "cnot",
            StrategyKind::HadamardCnot => "hadamard-cnot",
        })
    }
}

/// Eavesdropping policy: which interaction, applied to a `zeta` fraction of
/// rounds. `Honest` ignores `zeta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Strategy {
    pub kind: StrategyKind,
    pub zeta: f64,
}

impl Strategy {
    pub fn new(kind: StrategyKind, zeta: f64) -> Result<Self, ConfigError> {
        if !(0.0..=1.0).contains(&zeta) {
            return Err(ConfigError::InvalidZeta(zeta));
        }
        Ok(Self { kind, zeta })
    }

    pub fn honest() -> Self {
        Self {
            kind: StrategyKind::Honest,
            zeta: 0.0,
        }
    }

    pub fn cnot() -> Self {
        Self {
            kind: StrategyKind::Cnot,
            zeta: 1.0,
        }
    }

    pub fn hadamard_cnot(zeta: f64) -> Result<Self, ConfigError> {
        Self::new(StrategyKind::HadamardCnot, zeta)
    }

    /// Probability that a given round is attacked.
    pub fn attack_rate(&self) -> f64 {
        match self.kind {
            StrategyKind::Honest => 0.0,
            _ => self.zeta,
        }
    }
}

/// Which interaction Eve used on both pairs in a round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateChoice {
    /// Plain CNOT.
    P0,
    /// CNOT conjugated by Hadamard on the control wire.
    P1,
}

impl GateChoice {
    pub fn u(self) -> u8 {
        match self {
            GateChoice::P0 => 0,
            GateChoice::P1 => 1,
        }
    }

    /// Gate sequence for `P_u` on `(control, target)`.
    pub fn gates(self, control: usize, target: usize) -> Vec<Gate> {
        let cnot = Gate::Cnot { control, target };
        match self {
            GateChoice::P0 => vec![cnot],
            GateChoice::P1 => vec![Gate::H(control), cnot, Gate::H(control)],
        }
    }

    /// Basis in which this interaction copies the bit without disturbance.
    pub fn transparent_basis(self) -> Basis {
        match self {
            GateChoice::P0 => Basis::Z,
            GateChoice::P1 => Basis::X,
        }
    }
}

impl fmt::Display for GateChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.u())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorPrediction {
    NoError,
    Error,
    Unknown,
}

impl ErrorPrediction {
    pub fn predicts(self) -> Option<bool> {
        match self {
            ErrorPrediction::NoError => Some(false),
            ErrorPrediction::Error => Some(true),
            ErrorPrediction::Unknown => None,
        }
    }
}

/// What Eve measured on her ancillas.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EveMeasurement {
    Computational(BitString),
    Bell(BellOutcome),
}

/// Result of Eve's post-sifting measurement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeferredOutcome {
    pub measurement: EveMeasurement,
    pub guess: bool,
    pub guess_certain: bool,
    pub error_prediction: ErrorPrediction,
}

/// Eve's view of one round.
///
/// `error_prediction` is `Unknown` for unattacked rounds and for attacked
/// rounds that were discarded before she measured her ancillas.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EveRecord {
    pub attacked: bool,
    pub gate: Option<GateChoice>,
    pub ab_outcome: BellOutcome,
    pub eve_measurement: Option<EveMeasurement>,
    pub guess: Option<bool>,
    pub guess_certain: bool,
    pub error_prediction: ErrorPrediction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackOutcome {
    pub announcement: RelayAnnouncement,
    pub eve: EveRecord,
}

/// Outcome of the relay's Bell measurement on `(A, B)` with the ancilla pair
/// kept in memory.
#[derive(Debug, Clone, PartialEq)]
pub struct StoredRelay {
    pub announcement: RelayAnnouncement,
    pub outcome: BellOutcome,
    /// State of `(E1, E2)` after the measurement.
    pub residual: StateVector,
}

/// Random streams used inside one round.
#[derive(Debug, Clone)]
pub struct RoundRng {
    /// Born sampling of the relay's announcement.
    pub relay: TrialRng,
    /// Eve's private choices: the ζ draw, the coin for `u`, her ancilla
    /// measurement and her fallback guesses.
    pub eve: TrialRng,
}

pub const RELAY_LANE: u64 = 1;
pub const EVE_LANE: u64 = 2;

impl RoundRng {
    pub fn for_trial(seed: u64, trial_index: u64) -> Self {
        let root = TrialRng::substream(seed, trial_index);
        Self {
            relay: root.split(RELAY_LANE),
            eve: root.split(EVE_LANE),
        }
    }

    pub fn from_seed(seed: u64) -> Self {
        Self::for_trial(seed, 0)
    }
}

/// Attaches ancillas and applies `P_u` to `(A, E1)` and `(B, E2)`.
pub fn interact(
    qubit_a: &StateVector,
    qubit_b: &StateVector,
    gate: GateChoice,
) -> Result<StateVector, StateError> {
    for q in [qubit_a, qubit_b] {
        if q.n_qubits() != 1 {
            return Err(StateError::WrongQubitCount {
                expected: 1,
                found: q.n_qubits(),
            });
        }
    }
    let ancilla = StateVector::zero(1)?;
    let joint = qubit_a
        .tensor(&ancilla)?
        .tensor(qubit_b)?
        .tensor(&ancilla)?;
    let mut gates = gate.gates(WIRE_A, WIRE_E1);
    gates.extend(gate.gates(WIRE_B, WIRE_E2));
    joint.apply_all(&gates)
}

/// Bell decomposition of the attacked joint state over `(A, B) × (E1, E2)`.
pub fn attacked_decomposition(
    alice: PartyChoice,
    bob: PartyChoice,
    gate: GateChoice,
) -> Result<BellDecomposition, StateError> {
    let joint = interact(&encode(alice), &encode(bob), gate)?;
    bell_decompose(&joint, (WIRE_A, WIRE_B), (WIRE_E1, WIRE_E2))
}

/// Bell-measures `(A, B)` and returns the announcement with the residual
/// ancilla pair. In `PsiOnly` mode Φ± turn into `Failure`; Eve still keeps
/// her qubits.
pub fn relay_and_store(
    joint: &StateVector,
    mode: DetectionMode,
    rng: &mut TrialRng,
) -> Result<StoredRelay, StateError> {
    if joint.n_qubits() != 4 {
        return Err(StateError::WrongQubitCount {
            expected: 4,
            found: joint.n_qubits(),
        });
    }
    let (outcome, collapsed) = measure_bell(joint, WIRE_A, WIRE_B, rng)?;
    let (_, residual) = collapsed.project_out(&[WIRE_A, WIRE_B], &outcome.state())?;
    Ok(StoredRelay {
        announcement: mode.announce(outcome),
        outcome,
        residual,
    })
}

/// Eve's measurement on `(E1, E2)` once the common basis is public.
pub fn deferred_measure(
    residual: &StateVector,
    basis: Basis,
    gate: GateChoice,
    rng: &mut TrialRng,
) -> Result<DeferredOutcome, StateError> {
    if residual.n_qubits() != 2 {
        return Err(StateError::WrongQubitCount {
            expected: 2,
            found: residual.n_qubits(),
        });
    }
    if basis == gate.transparent_basis() {
        // The ancillas hold exact copies, so E1 is Alice's key bit in either
        // basis (for P1, |+⟩ → 0 and |−⟩ → 1).
        let (bits, _) = measure_computational(residual, &[0, 1], rng)?;
        let guess = bits.0[0];
        Ok(DeferredOutcome {
            measurement: EveMeasurement::Computational(bits),
            guess,
            guess_certain: true,
            error_prediction: ErrorPrediction::NoError,
        })
    } else {
        let (outcome, _) = measure_bell(residual, 0, 1, rng)?;
        let error_prediction = if outcome.is_minus() {
            ErrorPrediction::Error
        } else {
            ErrorPrediction::NoError
        };
        Ok(DeferredOutcome {
            measurement: EveMeasurement::Bell(outcome),
            guess: rng.coin(),
            guess_certain: false,
            error_prediction,
        })
    }
}

/// Runs one round under `strategy`, from preparation up to Eve's final
/// guess. Eve only measures her ancillas when the round survives sifting.
pub fn run_attack_round(
    alice: PartyChoice,
    bob: PartyChoice,
    strategy: Strategy,
    mode: DetectionMode,
    rng: &mut RoundRng,
) -> Result<AttackOutcome, StateError> {
    let matched = alice.basis == bob.basis;
    let attacked = rng.eve.bernoulli(strategy.attack_rate());
    let (qa, qb) = (encode(alice), encode(bob));

    if !attacked {
        let (outcome, _) = measure_bell(&qa.tensor(&qb)?, 0, 1, &mut rng.relay)?;
        let announcement = mode.announce(outcome);
        let kept = matched && announcement != RelayAnnouncement::Failure;
        let guess = kept.then(|| rng.eve.coin());
        return Ok(AttackOutcome {
            announcement,
            eve: EveRecord {
                attacked: false,
                gate: None,
                ab_outcome: outcome,
                eve_measurement: None,
                guess,
                guess_certain: false,
                error_prediction: ErrorPrediction::Unknown,
            },
        });
    }

    let gate = match strategy.kind {
        StrategyKind::HadamardCnot if rng.eve.coin() => GateChoice::P1,
        _ => GateChoice::P0,
    };
    let joint = interact(&qa, &qb, gate)?;
    let stored = relay_and_store(&joint, mode, &mut rng.relay)?;
    let kept = matched && stored.announcement != RelayAnnouncement::Failure;

    let mut eve = EveRecord {
        attacked: true,
        gate: Some(gate),
        ab_outcome: stored.outcome,
        eve_measurement: None,
        guess: None,
        guess_certain: false,
        error_prediction: ErrorPrediction::Unknown,
    };
    if kept {
        let deferred = deferred_measure(&stored.residual, alice.basis, gate, &mut rng.eve)?;
        eve.eve_measurement = Some(deferred.measurement);
        eve.guess = Some(deferred.guess);
        eve.guess_certain = deferred.guess_certain;
        eve.error_prediction = deferred.error_prediction;
    }
    Ok(AttackOutcome {
        announcement: stored.announcement,
        eve,
    })
}
